//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits with a failure status if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use statrs::distribution::{ContinuousCDF, StudentsT};

use seqsel::channel::{
    launch_amplitude, propagate_link, rrc_modulate, ssfm_span, AmplifierParams, FieldWaveform,
    FiberParams, StepPolicy, WdmConfig,
};
use seqsel::harness::{
    run_point, ss_bound_estimate, sweep, tiny_config, with_workers, write_csv, ExperimentConfig,
    PointOutcome, Scale, Scheme,
};
use seqsel::receiver::{air_bitwise, cdc, matched_filter_sample, RxChain, SymbolPrior};
use seqsel::selection::{
    bsss_decode, bsss_encode, pilot_bits, pilot_symbols, siss_decode, siss_encode, NliMetric,
    PermutationBook, PilotBook, ScramblerBook, SelectionMetric, WkMetric,
};
use seqsel::shaping::{
    ess_build_trellis, ess_choose_emax, index_to_bits, AmplitudeAlphabet, EssTrellis, PasCodec,
    ShapingConfig, Symbol4D,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure!(t <= limit, "{what} took {:.1} s, limit {} s", t.as_secs_f64(), limit.as_secs());
    Ok(())
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, var.sqrt())
}

fn qam64(rng: &mut ChaCha8Rng, n: usize) -> Vec<Symbol4D> {
    (0..n)
        .map(|_| Symbol4D::from_rails([0; 4].map(|_: u8| (2 * rng.random_range(0..8) - 7) as f64)))
        .collect()
}

fn energy(s: &[u32]) -> u64 {
    s.iter().map(|&a| (a * a) as u64).sum()
}

// 1. ESS exhaustive correctness
fn ess_exhaustive() -> Outcome {
    let start = Instant::now();
    let levels = [1u32, 3, 5, 7];
    let mut checked = 0usize;
    for n in [2usize, 4, 6] {
        // every length-n sequence in lexicographic order
        let all: Vec<Vec<u32>> = (0..4usize.pow(n as u32))
            .map(|mut i| {
                let mut s = vec![0; n];
                for p in (0..n).rev() {
                    s[p] = levels[i % 4];
                    i /= 4;
                }
                s
            })
            .collect();
        for r in [0.5, 1.0, 1.3] {
            let cfg = ok(ShapingConfig::new(r, n, AmplitudeAlphabet::qam64()))?;
            let k = cfg.input_bits();
            let emax = ok(ess_choose_emax(&cfg))?;
            let within_sphere = |e: u64| all.iter().filter(|s| energy(s) <= e).count();
            ensure!(within_sphere(emax) >= 1 << k, "N={n} R={r}: sphere too small");
            let below = all.iter().map(|s| energy(s)).filter(|&e| e < emax).max();
            if let Some(e) = below {
                ensure!(within_sphere(e) < 1 << k, "N={n} R={r}: emax {emax} not minimal");
            }
            let t = ok(ess_build_trellis(&cfg, emax))?;
            let codebook: Vec<&Vec<u32>> = all.iter().filter(|s| energy(s) <= emax).collect();
            ensure!(*t.total() == BigUint::from(codebook.len()), "N={n} R={r}: count mismatch");
            for i in 0..1usize << k {
                let bits = index_to_bits(&BigUint::from(i), k);
                let amps = ok(t.encode(&bits))?;
                ensure!(energy(&amps) <= emax, "N={n} R={r} i={i}: energy above emax");
                ensure!(&amps == codebook[i], "N={n} R={r} i={i}: not the i-th sphere sequence");
                ensure!(ok(t.decode(&amps))? == bits, "N={n} R={r} i={i}: decode mismatch");
                checked += 1;
            }
        }
    }
    within(start, Duration::from_secs(10), "ESS check")?;
    Ok(format!("{checked} indices over 9 configurations in {:.2} s", start.elapsed().as_secs_f64()))
}

// 2. SSFM analytic oracles
fn ssfm_oracles() -> Outcome {
    let start = Instant::now();
    // self-phase modulation of a CW field
    let fiber = FiberParams { beta2_ps2_per_km: 0.0, ..FiberParams::smf(1) };
    let p = 1e-2;
    let a = Complex64::new((p / 2.0f64).sqrt(), 0.0);
    let cw = ok(FieldWaveform::new(vec![a; 64], vec![a; 64], 100.0))?;
    let out = ok(ssfm_span(cw, &fiber, StepPolicy::Fixed { steps_per_span: 100 }))?;
    let expected = 8.0 / 9.0 * fiber.gamma_per_w_per_km * p * fiber.effective_length_km();
    let spm = ((out.x[7] / a).arg() / expected - 1.0).abs();
    ensure!(spm < 1e-6, "SPM phase relative error {spm:.2e}");

    // Gaussian pulse broadening, T1 = T0 sqrt(1 + (beta2 L / T0^2)^2)
    let t0 = 20.0;
    let len = 1 << 14;
    let fs = 1000.0;
    let dt = 1e3 / fs;
    let fiber = FiberParams {
        beta2_ps2_per_km: -21.7,
        gamma_per_w_per_km: 0.0,
        alpha_db_per_km: 0.0,
        span_length_km: 2.0 * t0 * t0 / 21.7,
        n_spans: 1,
    };
    let t = |i: usize| (i as f64 - len as f64 / 2.0) * dt;
    let pulse: Vec<Complex64> = (0..len)
        .map(|i| Complex64::new((-t(i).powi(2) / (2.0 * t0 * t0)).exp(), 0.0))
        .collect();
    let rms = |f: &[Complex64]| {
        let w: f64 = f.iter().map(|v| v.norm_sqr()).sum();
        let m: f64 = f.iter().enumerate().map(|(i, v)| t(i) * v.norm_sqr()).sum::<f64>() / w;
        (f.iter().enumerate().map(|(i, v)| (t(i) - m).powi(2) * v.norm_sqr()).sum::<f64>() / w).sqrt()
    };
    let field = ok(FieldWaveform::new(pulse.clone(), vec![Complex64::default(); len], fs))?;
    let out = ok(ssfm_span(field, &fiber, StepPolicy::default()))?;
    let ratio = rms(&out.x) / rms(&pulse);
    let theory = (1.0f64 + 4.0).sqrt();
    let broadening = (ratio / theory - 1.0).abs();
    ensure!(broadening < 1e-3, "broadening relative error {broadening:.2e}");

    // linear transparency
    let fiber = FiberParams { gamma_per_w_per_km: 0.0, ..FiberParams::smf(4) };
    let wdm = WdmConfig {
        n_channels: 1,
        symbol_rate_gbd: 46.5,
        spacing_ghz: 50.0,
        rolloff: 0.05,
        samples_per_symbol: 4,
        launch_power_dbm: 3.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let s = qam64(&mut rng, 1024);
    let amp = launch_amplitude(&wdm, 42.0);
    let rx = RxChain::for_link(&fiber, &wdm, amp);
    let field = ok(propagate_link(
        rrc_modulate(&s, &wdm, amp),
        &fiber,
        &AmplifierParams::noiseless(),
        StepPolicy::default(),
        |_| ChaCha8Rng::seed_from_u64(0),
    ))?;
    let y = matched_filter_sample(&cdc(field, &rx), &rx);
    let err: f64 = s.iter().zip(&y).map(|(a, b)| (a.x - b.x).norm_sqr() + (a.y - b.y).norm_sqr()).sum();
    let total: f64 = s.iter().map(Symbol4D::energy).sum();
    let linear = (err / total).sqrt();
    ensure!(linear < 1e-6, "linear transparency relative error {linear:.2e}");
    within(start, Duration::from_secs(60), "SSFM oracles")?;
    Ok(format!("SPM {spm:.1e}, broadening {broadening:.1e}, linear {linear:.1e}"))
}

/// Bit-wise GMI of uniform BRGC-labelled 8-PAM per rail by trapezoidal
/// integration over the received value.
fn gmi_rail_quadrature(sigma: f64) -> f64 {
    let pts: Vec<(f64, u32)> = (0..8u32)
        .map(|j| (j as f64 * 2.0 - 7.0, j))
        .map(|(v, j)| {
            // amplitude index and sign bit
            let a = (v.abs() as u32 - 1) / 2;
            let label = (a ^ (a >> 1)) | (u32::from(v < 0.0) << 2);
            let _ = j;
            (v, label)
        })
        .collect();
    let lik = |y: f64, x: f64| (-(y - x).powi(2) / (2.0 * sigma * sigma)).exp();
    let steps = 20_000;
    let mut loss = 0.0;
    for &(x, label) in &pts {
        let (lo, hi) = (x - 12.0 * sigma, x + 12.0 * sigma);
        let h = (hi - lo) / steps as f64;
        let mut acc = 0.0;
        for s in 0..=steps {
            let y = lo + s as f64 * h;
            let w = if s == 0 || s == steps { 0.5 } else { 1.0 };
            let pdf = lik(y, x) / (sigma * (2.0 * std::f64::consts::PI).sqrt());
            let all: f64 = pts.iter().map(|p| lik(y, p.0)).sum();
            let mut l = 0.0;
            for bit in 0..3 {
                let b = (label >> bit) & 1;
                let same: f64 = pts.iter().filter(|p| (p.1 >> bit) & 1 == b).map(|p| lik(y, p.0)).sum();
                l += (all / same).log2();
            }
            acc += w * pdf * l;
        }
        loss += acc * h / 8.0;
    }
    3.0 - loss
}

// 3. AIR oracle
fn air_oracle() -> Outcome {
    let start = Instant::now();
    let prior = SymbolPrior::uniform(&AmplitudeAlphabet::qam64());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 100_000;
    let tx = qam64(&mut rng, n);
    let clean = ok(air_bitwise(&tx, &tx, &prior))?.air_bits_per_4d;
    ensure!((clean - 12.0).abs() < 1e-6, "noiseless AIR {clean}");
    let mut details = vec![format!("noiseless {clean:.7}")];
    for snr_db in [6.0, 10.0, 14.0] {
        // 2D SNR with mean 2D energy 42
        let var2d = 42.0 / 10f64.powf(snr_db / 10.0);
        let sigma = (var2d / 2.0).sqrt();
        let noise = Normal::new(0.0, sigma).unwrap();
        let rx: Vec<Symbol4D> = tx
            .iter()
            .map(|s| Symbol4D::from_rails(s.rails().map(|r| r + noise.sample(&mut rng))))
            .collect();
        let mc = ok(air_bitwise(&tx, &rx, &prior))?.air_bits_per_4d / 2.0;
        let oracle = 2.0 * gmi_rail_quadrature(sigma);
        ensure!((mc - oracle).abs() < 0.05, "{snr_db} dB: {mc:.4} vs oracle {oracle:.4} bits/2D");
        details.push(format!("{snr_db} dB {mc:.3}/{oracle:.3}"));
    }
    within(start, Duration::from_secs(120), "AIR oracle")?;
    Ok(details.join(", "))
}

fn bsss_codec(n_t: usize) -> Result<PasCodec, String> {
    let cfg = ok(ShapingConfig::new(1.3, 256, AmplitudeAlphabet::qam64()))?;
    let cfg = ok(cfg.with_extra_bits(pilot_bits(n_t)))?;
    ok(PasCodec::new(ok(EssTrellis::for_config(&cfg))?, cfg.alphabet, 64))
}

// 4. End-to-end decodability
fn decodability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let alphabet = AmplitudeAlphabet::qam64();
    let pilots = PilotBook::new(&alphabet);
    let wk = WkMetric::new(32, 16);
    let plain = bsss_codec(1)?;
    for n_t in [1usize, 2, 4, 16, 256] {
        let codec = bsss_codec(n_t)?;
        let book = ok(ScramblerBook::generate(11, n_t, codec.input_bits() - pilot_bits(n_t)))?;
        let perms = ok(PermutationBook::generate(12, n_t, 64))?;
        for _ in 0..8 {
            let bits: Vec<bool> = (0..book.len()).map(|_| rng.random()).collect();
            let sel = ok(bsss_encode(&bits, &book, |b| codec.encode(b), &wk))?;
            let back = ok(bsss_decode(&ok(codec.decode(&sel.symbols))?, &book))?;
            ensure!(back == bits, "BSSS N_t={n_t} roundtrip failed");

            let info: Vec<bool> = (0..plain.input_bits()).map(|_| rng.random()).collect();
            let s = ok(plain.encode(&info))?;
            let sel = ok(siss_encode(&s, &perms, &pilots, &wk))?;
            ensure!(sel.symbols.len() == 64 + pilot_symbols(n_t), "SISS N_t={n_t} length");
            let (_, payload) = ok(siss_decode(&sel.symbols, &perms, &pilots))?;
            ensure!(ok(plain.decode(&payload))? == info, "SISS N_t={n_t} roundtrip failed");
        }
    }

    // pilot detection at 12 dB per-4D SNR against the shaped data energy
    let mean_energy = {
        let mut e = 0.0;
        for _ in 0..64 {
            let info: Vec<bool> = (0..plain.input_bits()).map(|_| rng.random()).collect();
            e += ok(plain.encode(&info))?.iter().map(Symbol4D::energy).sum::<f64>();
        }
        e / (64.0 * 64.0)
    };
    let sigma = (mean_energy / 10f64.powf(1.2) / 4.0).sqrt();
    let noise = Normal::new(0.0, sigma).unwrap();
    let trials = 1_000_000;
    let mut errors = 0usize;
    for _ in 0..trials {
        let label = rng.random_range(0..16);
        let p = pilots.points()[label];
        let y = Symbol4D::from_rails(p.rails().map(|r| r + noise.sample(&mut rng)));
        errors += usize::from(pilots.detect(&y) != label);
    }
    let rate = errors as f64 / trials as f64;
    ensure!(rate < 1e-3, "pilot error rate {rate:.2e}");
    Ok(format!("roundtrips exact for N_t in {{1,2,4,16,256}}; pilot error rate {rate:.1e} over {trials}"))
}

// 5. Selection monotonicity
fn monotonicity() -> Outcome {
    let start = Instant::now();
    let blocks = 200;
    let n_ts = [1usize, 2, 4, 8, 16];
    let fiber = FiberParams::smf(4);
    let wdm = WdmConfig {
        n_channels: 1,
        symbol_rate_gbd: 46.5,
        spacing_ghz: 50.0,
        rolloff: 0.05,
        samples_per_symbol: 4,
        launch_power_dbm: 5.0,
    };
    let plain = bsss_codec(1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut e_ref = 0.0;
    for _ in 0..64 {
        let info: Vec<bool> = (0..plain.input_bits()).map(|_| rng.random()).collect();
        e_ref += ok(plain.encode(&info))?.iter().map(Symbol4D::energy).sum::<f64>() / (64.0 * 64.0);
    }
    let steps = StepPolicy::Adaptive { max_phase_rad: 0.01 };
    let metric = ok(NliMetric::new(fiber, &wdm, 4, steps, e_ref))?;

    // SISS: nested permutation books make the selected metric a prefix minimum
    let perms = ok(PermutationBook::generate(21, 16, 64))?;
    let pilots = PilotBook::new(&AmplitudeAlphabet::qam64());
    let mut siss = vec![vec![0.0; blocks]; n_ts.len()];
    // BSSS: separate codec per N_t, same information stream per block
    let mut bsss = vec![vec![0.0; blocks]; n_ts.len()];
    for b in 0..blocks {
        let mut data = ChaCha8Rng::seed_from_u64(1000 + b as u64);
        let info: Vec<bool> = (0..plain.input_bits()).map(|_| data.random()).collect();
        let s = ok(plain.encode(&info))?;
        for (j, &n_t) in n_ts.iter().enumerate() {
            let book = ok(PermutationBook::generate(21, n_t, 64))?;
            siss[j][b] = ok(siss_encode(&s, &book, &pilots, &metric))?.cost;
            let codec = bsss_codec(n_t)?;
            let sb = ok(ScramblerBook::generate(22, n_t, codec.input_bits() - pilot_bits(n_t)))?;
            let mut data = ChaCha8Rng::seed_from_u64(5000 + b as u64);
            let bits: Vec<bool> = (0..sb.len()).map(|_| data.random()).collect();
            bsss[j][b] = ok(bsss_encode(&bits, &sb, |x| codec.encode(x), &metric))?.cost;
        }
        // exhaustive rescoring of the largest book
        let full: Vec<f64> = (0..16)
            .map(|i| metric.cost(&perms.interleave(i, &s)).map(|m| m.cost))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let best = full.iter().cloned().fold(f64::INFINITY, f64::min);
        ensure!(siss[4][b] == best, "block {b}: SISS selection is not the argmin");
    }
    let t = StudentsT::new(0.0, 1.0, (blocks - 1) as f64).unwrap();
    let mut lines = Vec::new();
    for (name, costs) in [("SISS", &siss), ("BSSS", &bsss)] {
        let means: Vec<f64> = costs.iter().map(|c| mean_sd(c).0).collect();
        for j in 1..n_ts.len() {
            let d: Vec<f64> = costs[j].iter().zip(&costs[j - 1]).map(|(a, b)| a - b).collect();
            let (m, sd) = mean_sd(&d);
            if m > 0.0 {
                // one-sided paired test for an increase
                let p = 1.0 - t.cdf(m / (sd / (blocks as f64).sqrt()));
                ensure!(p > 0.05, "{name}: mean metric rises from N_t={} to {} (p={p:.3})", n_ts[j - 1], n_ts[j]);
            }
        }
        lines.push(format!(
            "{name} {}",
            means.iter().map(|m| format!("{m:.3}")).collect::<Vec<_>>().join(" > ")
        ));
    }
    within(start, Duration::from_secs(1800), "monotonicity")?;
    Ok(format!("{} ({:.0} s)", lines.join("; "), start.elapsed().as_secs_f64()))
}

fn paired_gain(a: &PointOutcome, b: &PointOutcome) -> (f64, f64) {
    let d: Vec<f64> = a.evaluation.block_se.iter().zip(&b.evaluation.block_se).map(|(x, y)| x - y).collect();
    let (m, sd) = mean_sd(&d);
    (m, 1.959_963_984_540_054 * sd / (d.len() as f64).sqrt())
}

fn optimum(cfg: &ExperimentConfig, scheme: Scheme, n_t: usize) -> Result<PointOutcome, String> {
    let mut best: Option<PointOutcome> = None;
    for &p in &cfg.sweep.power_dbm {
        let o = ok(run_point(cfg, scheme, p, n_t))?;
        if best.as_ref().is_none_or(|b| o.row.se_bits_per_s_hz > b.row.se_bits_per_s_hz) {
            best = Some(o);
        }
    }
    best.ok_or_else(|| "empty power grid".into())
}

// 6. Desk-scale nonlinear gain
fn desk_gain() -> Outcome {
    let start = Instant::now();
    let cfg = ok(ExperimentConfig::from_toml_str(
        Scale::Desk,
        "n_blocks = 400\n[sweep]\npower_dbm = [0.0, 1.0, 2.0, 3.0]\n",
    ))?;
    let mb = optimum(&cfg, Scheme::Mb, 1)?;
    let ess = optimum(&cfg, Scheme::Ess, 1)?;
    let bsss = optimum(&cfg, Scheme::EssBsss, 16)?;
    let (g1, c1) = paired_gain(&bsss, &ess);
    let (g2, c2) = paired_gain(&ess, &mb);
    let summary = format!(
        "SE at optimum: MB {:.4} ({} dBm), ESS {:.4} ({} dBm), BSSS-NLI-16 {:.4} ({} dBm); \
         BSSS-ESS {g1:+.4} +- {c1:.4}, ESS-MB {g2:+.4} +- {c2:.4} bit/s/Hz ({:.0} s)",
        mb.row.se_bits_per_s_hz,
        mb.row.power_dbm,
        ess.row.se_bits_per_s_hz,
        ess.row.power_dbm,
        bsss.row.se_bits_per_s_hz,
        bsss.row.power_dbm,
        start.elapsed().as_secs_f64()
    );
    ensure!(g1 - c1 > 0.0 && g2 - c2 > 0.0, "{summary}");
    Ok(summary)
}

// 7. Degenerate equivalences
fn degenerate() -> Outcome {
    let cfg = ok(ExperimentConfig::from_toml_str(Scale::Desk, "n_blocks = 40\n[sweep]\npower_dbm = [2.0]\n"))?;
    let ess = ok(run_point(&cfg, Scheme::Ess, 2.0, 1))?;
    let key = |o: &PointOutcome| (o.row.air_bits_per_4d, o.row.se_bits_per_s_hz, o.row.ci95);
    for scheme in [Scheme::EssBsss, Scheme::EssSiss] {
        let sel = ok(run_point(&cfg, scheme, 2.0, 1))?;
        ensure!(key(&sel) == key(&ess), "{scheme} with N_t=1 differs from ESS");
    }
    let bound = ok(ss_bound_estimate(&cfg, 2.0, 1.0, cfg.n_blocks))?;
    ensure!(key(&bound) == key(&ess), "bound at eta=1 differs from ESS");

    let linear = ok(ExperimentConfig::from_toml_str(
        Scale::Desk,
        "n_blocks = 100\n[fiber]\ngamma_per_w_per_km = 0.0\n[sweep]\npower_dbm = [2.0]\n",
    ))?;
    linear.validate().map_err(|e| e.to_string())?;
    let e = ok(run_point(&linear, Scheme::Ess, 2.0, 1))?;
    let b = ok(run_point(&linear, Scheme::EssBsss, 2.0, 16))?;
    let (g, c) = paired_gain(&b, &e);
    ensure!(g <= c, "linear channel shows a selection gain {g:+.4} +- {c:.4}");
    Ok(format!("N_t=1 and eta=1 reproduce ESS exactly; linear BSSS-ESS {g:+.4} +- {c:.4}"))
}

// 8. Determinism across worker counts
fn determinism() -> Outcome {
    let mut cfg = tiny_config();
    cfg.schemes = vec![Scheme::Mb, Scheme::Ess, Scheme::EssBsss, Scheme::EssSiss];
    cfg.selection.n_t = vec![1, 4, 16];
    cfg.sweep.power_dbm = vec![0.0, 3.0];
    let csv = |workers: usize| -> Result<Vec<u8>, String> {
        let report = ok(with_workers(workers, || sweep(&cfg)))?;
        ensure!(report.failures() == 0, "sweep had failing points");
        let mut buf = Vec::new();
        ok(write_csv(&report.rows, &mut buf))?;
        Ok(buf)
    };
    let one = csv(1)?;
    for w in [2, 4, 1] {
        ensure!(csv(w)? == one, "CSV with {w} workers differs");
    }
    Ok(format!("{} bytes identical for 1, 2 and 4 workers", one.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("ESS exhaustive correctness", ess_exhaustive),
        ("SSFM analytic oracles", ssfm_oracles),
        ("AIR oracle", air_oracle),
        ("end-to-end decodability", decodability),
        ("selection monotonicity", monotonicity),
        ("desk-scale nonlinear gain", desk_gain),
        ("degenerate equivalences", degenerate),
        ("determinism", determinism),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(d) => println!("criterion {} {name}: PASS [{secs:.1} s] {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {} {name}: FAIL [{secs:.1} s] {d}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
