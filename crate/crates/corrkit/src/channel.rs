//! Time-varying SIMO channel and signal generator.
//!
//! A single transmit antenna sends unit-power symbols through a length-`Lc`
//! FIR channel to `M` receive antennas: `y(n) = Σ_l h(n;l)·s(n−l) + v(n)`.
//! Tap vectors evolve as a first-order Gauss–Markov process with per-symbol
//! correlation `alpha` (`alpha = 1` is time-invariant). The module produces
//! both the exact model correlations of the stacked received vector
//! ("known R") and exponentially-forgotten sample estimates from the
//! received data ("unknown R"), either way as the per-instant first-column
//! observations the recursive factor update consumes.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{CMatrix, LinalgError, Result};
use crate::rchol::FirstColumnObservation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constellation {
    Bpsk,
    Qpsk,
}

#[derive(Clone, Debug)]
pub struct ChannelParams {
    /// Receive antennas.
    pub m: usize,
    /// Channel order (number of taps).
    pub lc: usize,
    /// Horizon in symbols.
    pub t: usize,
    /// Per-symbol tap correlation in [0, 1]; 1 = time-invariant.
    pub alpha: f64,
    /// Noise variance per receive component (SNR = 1/noise_var).
    pub noise_var: f64,
    pub seed: u64,
    pub constellation: Constellation,
}

impl ChannelParams {
    fn validate(&self) -> Result<()> {
        if self.m < 1 || self.lc < 1 {
            return Err(LinalgError::Dimension(
                "channel needs at least one antenna and one tap".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(LinalgError::Range(format!(
                "alpha must be in [0, 1], got {}",
                self.alpha
            )));
        }
        if self.noise_var < 0.0 {
            return Err(LinalgError::Range(format!(
                "noise_var must be nonnegative, got {}",
                self.noise_var
            )));
        }
        Ok(())
    }
}

/// One realization: taps per instant, transmitted symbols and receiver noise.
#[derive(Clone, Debug)]
pub struct ChannelRealization {
    pub m: usize,
    pub lc: usize,
    /// `taps[n]` is `M×Lc`; column `l` is the tap vector `h(n;l)`.
    pub taps: Vec<CMatrix>,
    pub symbols: Vec<C64>,
    /// `noise[n]` is `M×1`.
    pub noise: Vec<CMatrix>,
    pub noise_var: f64,
}

fn complex_gaussian(rng: &mut ChaCha8Rng, variance: f64) -> C64 {
    // Box–Muller; circular complex with E|w|² = variance
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    C64::new(r * c, r * s).scale((variance / 2.0).sqrt())
}

/// Draw a full realization from a deterministic stream of the seed.
///
/// Taps follow `h(n;l) = alpha·h(n−1;l) + sqrt(1−alpha²)·w(n;l)` with
/// per-coefficient variance `1/Lc`, started from the stationary
/// distribution, so total channel power is one and SNR = 1/noise_var.
pub fn generate_channel(p: &ChannelParams) -> Result<ChannelRealization> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let tap_var = 1.0 / p.lc as f64;
    let innov = (1.0 - p.alpha * p.alpha).sqrt();

    let mut taps = Vec::with_capacity(p.t);
    let mut current = CMatrix::zeros(p.m, p.lc);
    for l in 0..p.lc {
        for i in 0..p.m {
            current[(i, l)] = complex_gaussian(&mut rng, tap_var);
        }
    }
    taps.push(current.clone());
    for _ in 1..p.t {
        let mut next = CMatrix::zeros(p.m, p.lc);
        for l in 0..p.lc {
            for i in 0..p.m {
                let w = complex_gaussian(&mut rng, tap_var);
                next[(i, l)] = current[(i, l)].scale(p.alpha) + w.scale(innov);
            }
        }
        current = next;
        taps.push(current.clone());
    }

    let mut symbols = Vec::with_capacity(p.t);
    for _ in 0..p.t {
        let s = match p.constellation {
            Constellation::Bpsk => {
                if rng.gen::<bool>() {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(-1.0, 0.0)
                }
            }
            Constellation::Qpsk => {
                let re = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                let im = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                C64::new(re, im).scale(std::f64::consts::FRAC_1_SQRT_2)
            }
        };
        symbols.push(s);
    }

    let mut noise = Vec::with_capacity(p.t);
    for _ in 0..p.t {
        let mut v = CMatrix::zeros(p.m, 1);
        for i in 0..p.m {
            v[(i, 0)] = complex_gaussian(&mut rng, p.noise_var);
        }
        noise.push(v);
    }

    Ok(ChannelRealization {
        m: p.m,
        lc: p.lc,
        taps,
        symbols,
        noise,
        noise_var: p.noise_var,
    })
}

/// Received vectors `y(n) = Σ_l h(n;l)·s(n−l) + v(n)`, with `s(m) = 0` for
/// `m < 0`.
pub fn receive(ch: &ChannelRealization) -> Vec<CMatrix> {
    let t = ch.taps.len();
    let mut out = Vec::with_capacity(t);
    for n in 0..t {
        let mut y = ch.noise[n].clone();
        for l in 0..ch.lc {
            if l > n {
                break;
            }
            let s = ch.symbols[n - l];
            for i in 0..ch.m {
                y[(i, 0)] += ch.taps[n][(i, l)] * s;
            }
        }
        out.push(y);
    }
    out
}

/// Exact vs sample-estimated correlation data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamMode {
    Exact,
    Sample,
}

/// One time instant of a correlation stream: the first-column observation,
/// plus the full `R_N(n)` in exact mode (for oracles).
#[derive(Clone, Debug)]
pub struct StreamEntry {
    pub obs: FirstColumnObservation,
    pub full: Option<CMatrix>,
}

/// Per-instant block correlation data of the stacked received vector.
#[derive(Clone, Debug)]
pub struct CorrelationStream {
    pub mode: StreamMode,
    pub m: usize,
    pub depth: usize,
    /// Forgetting factor (sample mode only).
    pub lambda: Option<f64>,
    pub entries: Vec<StreamEntry>,
}

fn tap_col(ch: &ChannelRealization, n: usize, l: i64) -> Option<CMatrix> {
    if l < 0 || l >= ch.lc as i64 {
        return None;
    }
    let l = l as usize;
    let mut h = CMatrix::zeros(ch.m, 1);
    for i in 0..ch.m {
        h[(i, 0)] = ch.taps[n][(i, l)];
    }
    Some(h)
}

/// `r^n_{ij} = Σ_l h(n−i;l)·hᴴ(n−j;l+(i−j)) + noise_var·I·[i=j]`, the
/// expectation over iid unit-power symbols and noise conditioned on the tap
/// trajectory (`s(n−i−l) = s(n−j−l')` forces `l' = l + i − j`).
fn exact_block(ch: &ChannelRealization, n: usize, i: usize, j: usize) -> CMatrix {
    let mut r = CMatrix::zeros(ch.m, ch.m);
    let lag = i as i64 - j as i64;
    for l in 0..ch.lc as i64 {
        let (Some(hi), Some(hj)) = (tap_col(ch, n - i, l), tap_col(ch, n - j, l + lag)) else {
            continue;
        };
        r = r.add(&hi.mul(&hj.conj_t()));
    }
    if i == j {
        for k in 0..ch.m {
            r[(k, k)] += C64::new(ch.noise_var, 0.0);
        }
    }
    r
}

/// Exact correlation data at instant `n`: full `R_N(n)`, its first block
/// column and `r^n_{11}`.
pub fn exact_correlation(ch: &ChannelRealization, depth: usize, n: usize) -> Result<StreamEntry> {
    // every referenced symbol must exist; r^n_{11} additionally needs n ≥ 1
    let needed = (depth - 1 + ch.lc - 1).max(1);
    if n < needed || n >= ch.taps.len() {
        return Err(LinalgError::Range(format!(
            "instant {} outside valid window [{}, {})",
            n,
            needed,
            ch.taps.len()
        )));
    }
    let m = ch.m;
    let mut full = CMatrix::zeros(depth * m, depth * m);
    for i in 0..depth {
        for j in 0..=i {
            let b = exact_block(ch, n, i, j);
            if i == j {
                full.set_block(i, i, &b.hermitian_part());
            } else {
                full.set_block(i, j, &b);
                full.set_block(j, i, &b.conj_t());
            }
        }
    }
    let blocks: Vec<CMatrix> = (0..depth).map(|i| full.block(i, 0, m)).collect();
    let tilde_d = if depth > 1 {
        full.block(1, 1, m)
    } else {
        exact_block(ch, n, 1, 1).hermitian_part()
    };
    let obs = FirstColumnObservation::new(n, blocks, tilde_d)?;
    Ok(StreamEntry {
        obs,
        full: Some(full),
    })
}

/// Exact-correlation stream over `[start, end)`.
pub fn exact_correlation_stream(
    ch: &ChannelRealization,
    depth: usize,
    start: usize,
    end: usize,
) -> Result<CorrelationStream> {
    let mut entries = Vec::with_capacity(end.saturating_sub(start));
    for n in start..end {
        entries.push(exact_correlation(ch, depth, n)?);
    }
    Ok(CorrelationStream {
        mode: StreamMode::Exact,
        m: ch.m,
        depth,
        lambda: None,
        entries,
    })
}

/// Exponentially-forgotten sample estimates from the received sequence:
/// `r̂^n_{i0} = λ·r̂^{n−1}_{i0} + (1−λ)·y(n−i)·yᴴ(n)`, initialized at zero.
/// Emits first-column observations only (never assembles `R`); entries start
/// at `n = depth − 1`, the first instant where every lag exists.
///
/// `λ = 1` is the degenerate frozen-at-zero estimator and is accepted as
/// such.
pub fn sample_correlation_stream(
    y: &[CMatrix],
    depth: usize,
    lambda: f64,
) -> Result<CorrelationStream> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(LinalgError::Range(format!(
            "lambda must be in (0, 1], got {lambda}"
        )));
    }
    if y.is_empty() || depth == 0 {
        return Err(LinalgError::Dimension(
            "sample stream needs data and a positive depth".into(),
        ));
    }
    let m = y[0].rows();
    let mut r_hat = vec![CMatrix::zeros(m, m); depth];
    let mut r11_hat = CMatrix::zeros(m, m);
    let mut entries = Vec::new();
    for n in 0..y.len() {
        for (i, acc) in r_hat.iter_mut().enumerate() {
            if n < i {
                continue;
            }
            let inst = y[n - i].mul(&y[n].conj_t());
            *acc = acc
                .scale(C64::new(lambda, 0.0))
                .add(&inst.scale(C64::new(1.0 - lambda, 0.0)));
        }
        if n >= 1 {
            let inst = y[n - 1].mul(&y[n - 1].conj_t());
            r11_hat = r11_hat
                .scale(C64::new(lambda, 0.0))
                .add(&inst.scale(C64::new(1.0 - lambda, 0.0)));
        }
        if n >= depth - 1 {
            let mut blocks: Vec<CMatrix> = r_hat.clone();
            blocks[0] = blocks[0].hermitian_part();
            let obs = FirstColumnObservation::new(n, blocks, r11_hat.hermitian_part())?;
            entries.push(StreamEntry { obs, full: None });
        }
    }
    Ok(CorrelationStream {
        mode: StreamMode::Sample,
        m,
        depth,
        lambda: Some(lambda),
        entries,
    })
}

/// Dump the received sequence as CSV: one record per instant, columns
/// `n, y0_re, y0_im, y1_re, y1_im, ...`.
pub fn write_received_csv<W: std::io::Write>(y: &[CMatrix], w: &mut W) -> std::io::Result<()> {
    if y.is_empty() {
        return Ok(());
    }
    let m = y[0].rows();
    write!(w, "n")?;
    for i in 0..m {
        write!(w, ",y{i}_re,y{i}_im")?;
    }
    writeln!(w)?;
    for (n, yn) in y.iter().enumerate() {
        write!(w, "{n}")?;
        for i in 0..m {
            write!(w, ",{:.16e},{:.16e}", yn[(i, 0)].re, yn[(i, 0)].im)?;
        }
        writeln!(w)?;
    }
    Ok(())
}
