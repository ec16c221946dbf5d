//! Track the factors of a slowly varying correlation matrix with the
//! recursive update, refreshing only the first block column each instant,
//! and compare the reconstruction against the exact matrix.

use corrkit::channel::{exact_correlation, generate_channel, ChannelParams, Constellation};
use corrkit::linalg::reconstruct;
use corrkit::metrics::compare;
use corrkit::rchol::{factors_of, rchol_init, rchol_update};

fn main() {
    let ch = generate_channel(&ChannelParams {
        m: 2,
        lc: 1,
        t: 200,
        alpha: 0.999,
        noise_var: 0.01,
        seed: 42,
        constellation: Constellation::Qpsk,
    })
    .unwrap();
    let depth = 6;

    let first = depth - 1;
    let mut state = rchol_init(&exact_correlation(&ch, depth, first).unwrap().obs, 2, depth)
        .expect("seed factorization");

    for n in (first + 1)..ch.taps.len() {
        let entry = exact_correlation(&ch, depth, n).unwrap();
        state = rchol_update(&state, &entry.obs).expect("update");
        if n % 40 == 0 {
            let rebuilt = reconstruct(&factors_of(&state).unwrap());
            let rep = compare(entry.full.as_ref().unwrap(), &rebuilt, 1e-9).unwrap();
            println!(
                "n = {n:3}  frob_rel_err = {:.3e}  max_abs_diff = {:.3e}",
                rep.frob_rel_err, rep.max_abs_diff
            );
        }
    }
}
