//! Quick property checks runnable from the command line.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentConfig, Scale, Scheme};
use super::output::{parse_csv, write_csv};
use super::point::run_point;
use crate::channel::{
    launch_amplitude, propagate_link, rrc_modulate, ssfm_span, AmplifierParams, FiberParams,
    FieldWaveform, StepPolicy, WdmConfig,
};
use crate::error::{Error, Result};
use crate::receiver::{air_bitwise, cdc, matched_filter_sample, RxChain, SymbolPrior};
use crate::selection::{
    bsss_decode, bsss_encode, pilot_bits, siss_decode, siss_encode, wk_metric, PermutationBook,
    PilotBook, ScramblerBook, WkAggregate, WkMetric,
};
use crate::shaping::{
    ess_build_trellis, ess_choose_emax, index_to_bits, AmplitudeAlphabet, EssTrellis,
    PasCodec, ShapingConfig, Symbol4D,
};

#[derive(Debug, Clone)]
pub struct SelftestCase {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(cond: bool, detail: String) -> Result<String> {
    if cond {
        Ok(detail)
    } else {
        Err(Error::Metric(detail))
    }
}

fn qam64_block(rng: &mut ChaCha8Rng, n: usize) -> Vec<Symbol4D> {
    (0..n)
        .map(|_| Symbol4D::from_rails([0; 4].map(|_: u8| (2 * rng.random_range(0..8) - 7) as f64)))
        .collect()
}

fn ess_small() -> Result<String> {
    let cfg = ShapingConfig::new(1.3, 4, AmplitudeAlphabet::qam64())?;
    let emax = ess_choose_emax(&cfg)?;
    let t = ess_build_trellis(&cfg, emax)?;
    let count = t.total().clone();
    for i in 0u32..64 {
        let bits = index_to_bits(&i.into(), 6);
        let amps = t.encode(&bits)?;
        if t.decode(&amps)? != bits || amps.iter().map(|a| (a * a) as u64).sum::<u64>() > emax {
            return Err(Error::Metric(format!("index {i} does not roundtrip")));
        }
    }
    check(emax == 60 && count == 82u32.into(), format!("N=4 R=1.3: emax {emax}, {count} sequences"))
}

fn spm_phase() -> Result<String> {
    let fiber = FiberParams {
        beta2_ps2_per_km: 0.0,
        ..FiberParams::smf(1)
    };
    let p = 5e-3;
    let a = Complex64::new((p / 2.0_f64).sqrt(), 0.0);
    let field = FieldWaveform::new(vec![a; 16], vec![a; 16], 100.0)?;
    let out = ssfm_span(field, &fiber, StepPolicy::Fixed { steps_per_span: 50 })?;
    let phase = (out.x[0] / a).arg();
    let expected = 8.0 / 9.0 * fiber.gamma_per_w_per_km * p * fiber.effective_length_km();
    let rel = (phase / expected - 1.0).abs();
    check(rel < 1e-6, format!("phase {phase:.9} rad, relative error {rel:.2e}"))
}

fn linear_transparency() -> Result<String> {
    let fiber = FiberParams {
        gamma_per_w_per_km: 0.0,
        ..FiberParams::smf(3)
    };
    let wdm = WdmConfig {
        n_channels: 1,
        symbol_rate_gbd: 46.5,
        spacing_ghz: 50.0,
        rolloff: 0.05,
        samples_per_symbol: 4,
        launch_power_dbm: 0.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = qam64_block(&mut rng, 256);
    let amp = launch_amplitude(&wdm, 42.0);
    let field = rrc_modulate(&s, &wdm, amp);
    let out = propagate_link(field, &fiber, &AmplifierParams::noiseless(), StepPolicy::default(), |_| {
        ChaCha8Rng::seed_from_u64(0)
    })?;
    let y = matched_filter_sample(&cdc(out, &RxChain::for_link(&fiber, &wdm, amp)), &RxChain::for_link(&fiber, &wdm, amp));
    let err: f64 = s.iter().zip(&y).map(|(a, b)| (a.x - b.x).norm_sqr() + (a.y - b.y).norm_sqr()).sum();
    let energy: f64 = s.iter().map(Symbol4D::energy).sum();
    let rel = (err / energy).sqrt();
    check(rel < 1e-6, format!("relative error {rel:.2e}"))
}

fn air_noiseless() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let s = qam64_block(&mut rng, 4096);
    let air = air_bitwise(&s, &s, &SymbolPrior::uniform(&AmplitudeAlphabet::qam64()))?;
    check(
        (air.air_bits_per_4d - 12.0).abs() < 1e-6,
        format!("{:.9} bits/4D", air.air_bits_per_4d),
    )
}

fn selection_roundtrips() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let alphabet = AmplitudeAlphabet::qam64();
    let base = ShapingConfig::new(1.3, 64, alphabet.clone())?;
    let wk = WkMetric::new(8, 4);
    for n_t in [1usize, 2, 4, 16] {
        let p = pilot_bits(n_t);
        let s = base.with_extra_bits(p)?;
        let codec = PasCodec::new(EssTrellis::for_config(&s)?, alphabet.clone(), 16)?;
        let book = ScramblerBook::generate(1, n_t, codec.input_bits() - p)?;
        let bits: Vec<bool> = (0..book.len()).map(|_| rng.random()).collect();
        let sel = bsss_encode(&bits, &book, |b| codec.encode(b), &wk)?;
        if bsss_decode(&codec.decode(&sel.symbols)?, &book)? != bits {
            return Err(Error::Metric(format!("BSSS N_t={n_t} does not roundtrip")));
        }
        let perms = PermutationBook::generate(1, n_t, 32)?;
        let pilots = PilotBook::new(&alphabet);
        let payload = qam64_block(&mut rng, 32);
        let sel = siss_encode(&payload, &perms, &pilots, &wk)?;
        if siss_decode(&sel.symbols, &perms, &pilots)?.1 != payload {
            return Err(Error::Metric(format!("SISS N_t={n_t} does not roundtrip")));
        }
    }
    Ok("BSSS and SISS exact for N_t in {1, 2, 4, 16}".into())
}

fn wk_invariance() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let s = qam64_block(&mut rng, 64);
    let mut t = s.clone();
    t.reverse();
    t.swap(3, 40);
    let a = wk_metric(&s, 64, 64, WkAggregate::Mean)?.cost;
    let b = wk_metric(&t, 64, 64, WkAggregate::Mean)?.cost;
    check((a - b).abs() < 1e-12 * a, format!("full-window kurtosis {a:.6}"))
}

fn csv_roundtrip() -> Result<String> {
    let cfg = tiny_config();
    let row = run_point(&cfg, Scheme::Ess, 0.0, 1)?.row;
    let mut buf = Vec::new();
    write_csv(std::slice::from_ref(&row), &mut buf)?;
    check(parse_csv(buf.as_slice())? == vec![row], "parse(emit(rows)) = rows".into())
}

/// Single channel, two spans, WK selection: a configuration that runs in
/// well under a second.
pub fn tiny_config() -> ExperimentConfig {
    ExperimentConfig::from_toml_str(
        Scale::Desk,
        r#"
n_blocks = 16
schemes = ["ESS", "ESS+BSSS"]
[selection]
n_t = [4]
metric = "WK"
[fiber]
n_spans = 2
[wdm]
n_channels = 1
samples_per_symbol = 4
[steps]
mode = "adaptive"
max_phase_rad = 0.02
[sweep]
power_dbm = [0.0]
"#,
    )
    .expect("valid tiny configuration")
}

fn determinism() -> Result<String> {
    let cfg = tiny_config();
    let a = run_point(&cfg, Scheme::EssBsss, 0.0, 4)?.row;
    let b = run_point(&cfg, Scheme::EssBsss, 0.0, 4)?.row;
    check(a == b, format!("SE {:.6} bit/s/Hz twice", a.se_bits_per_s_hz))
}

/// Runs every case; failures are reported, not propagated.
pub fn selftest() -> Vec<SelftestCase> {
    let cases: [(&'static str, fn() -> Result<String>); 8] = [
        ("ess_exhaustive_small", ess_small),
        ("ssfm_spm_phase", spm_phase),
        ("ssfm_linear_transparency", linear_transparency),
        ("air_noiseless", air_noiseless),
        ("selection_roundtrips", selection_roundtrips),
        ("wk_full_window_invariance", wk_invariance),
        ("csv_roundtrip", csv_roundtrip),
        ("point_determinism", determinism),
    ];
    cases
        .iter()
        .map(|(name, f)| match f() {
            Ok(detail) => SelftestCase { name, passed: true, detail },
            Err(e) => SelftestCase { name, passed: false, detail: e.to_string() },
        })
        .collect()
}
