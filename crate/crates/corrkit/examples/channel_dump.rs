//! Simulate a time-varying SIMO channel, dump the received sequence as CSV
//! and show how the exponentially-forgotten sample correlations approach
//! the exact model values.

use corrkit::channel::{
    exact_correlation, generate_channel, receive, sample_correlation_stream, ChannelParams,
    Constellation,
};

fn main() {
    let ch = generate_channel(&ChannelParams {
        m: 2,
        lc: 3,
        t: 2000,
        alpha: 1.0,
        noise_var: 0.01,
        seed: 7,
        constellation: Constellation::Bpsk,
    })
    .unwrap();
    let y = receive(&ch);

    let mut head = Vec::new();
    corrkit::channel::write_received_csv(&y[..5], &mut head).unwrap();
    println!(
        "first received samples:\n{}",
        String::from_utf8(head).unwrap()
    );

    let depth = 4;
    let stream = sample_correlation_stream(&y, depth, 0.98).unwrap();
    for entry in stream.entries.iter().filter(|e| e.obs.time() % 400 == 0) {
        let n = entry.obs.time();
        let exact = exact_correlation(&ch, depth, n).unwrap();
        let err: f64 = (0..depth)
            .map(|i| entry.obs.blocks()[i].max_abs_diff(&exact.obs.blocks()[i]))
            .fold(0.0, f64::max)
            / exact.obs.blocks()[0].max_abs();
        println!("n = {n:4}  first-column estimate rel err = {err:.3}");
    }
}
