//! Acceptance suite: one test per acceptance criterion, each printing a
//! single pass/fail line (run with `--nocapture` to see the lines for
//! passing tests).

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use wavelet_learn::analysis::{cascade, closest_wavelet, filter_distance, sample_signal};
use wavelet_learn::datagen::{make_dataset, random_wavelet, BaseWave, SynthConfig};
use wavelet_learn::filterbank::{
    classical_filter, validate_orthonormal, wavelet_loss, ClassicalWaveletId, FilterPair,
    ScalingFilter,
};
use wavelet_learn::grad::fd_check;
use wavelet_learn::training::{train, TrainingConfig};
use wavelet_learn::transform::{dwt, dwt_step, idwt, Signal};

// -- small self-contained helpers -------------------------------------------

/// xorshift-based generator so the suite does not depend on the library's
/// own seeding choices.
struct TestRng(u64);

impl TestRng {
    fn new(seed: u64) -> Self {
        TestRng(seed.wrapping_mul(0x9e3779b97f4a7c15).max(1))
    }

    fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// uniform in [-1, 1)
    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 * 2.0 - 1.0
    }

    fn vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.unit()).collect()
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Naive DFT power at one bin.
fn bin_power(x: &[f64], bin: usize) -> f64 {
    let n = x.len() as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for (i, &v) in x.iter().enumerate() {
        let angle = -std::f64::consts::TAU * bin as f64 * i as f64 / n;
        re += v * angle.cos();
        im += v * angle.sin();
    }
    re * re + im * im
}

/// Fraction of real-signal spectral energy strictly below `cut` (bins
/// weighted for the symmetric half-spectrum).
fn low_band_fraction(x: &[f64], cut: usize) -> f64 {
    let half = x.len() / 2;
    let power: Vec<f64> = (0..=half).map(|b| bin_power(x, b)).collect();
    let total = power[0] + power[half] + 2.0 * power[1..half].iter().sum::<f64>();
    if total == 0.0 {
        return 1.0;
    }
    let low = power[0] + 2.0 * power[1..cut].iter().sum::<f64>();
    low / total
}

fn report(criterion: u32, pass: bool, detail: &str) {
    println!(
        "[{}] criterion {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

// -- criterion 1: perfect reconstruction ------------------------------------

#[test]
fn criterion_1_perfect_reconstruction() {
    let started = Instant::now();
    let mut rng = TestRng::new(11);
    let signals: Vec<Signal> = (0..100)
        .map(|_| Signal::new(rng.vec(1024)).unwrap())
        .collect();
    let mut worst = 0.0f64;
    for id in ClassicalWaveletId::all() {
        let pair = FilterPair::from_scaling(classical_filter(id));
        for x in &signals {
            let back = idwt(&dwt(x, &pair, 6).unwrap(), &pair).unwrap();
            worst = worst.max(max_abs_diff(x.samples(), back.samples()));
        }
    }
    let elapsed = started.elapsed();
    let pass = worst < 1e-9 && elapsed.as_secs_f64() < 10.0;
    report(
        1,
        pass,
        &format!(
            "perfect reconstruction, 24 filters x 100 signals (N=1024, J=6): \
             max error {worst:.3e} (< 1e-9), runtime {elapsed:.2?} (< 10 s)"
        ),
    );
    assert!(pass);
}

// -- criterion 2: single-level oracle equivalence ----------------------------

/// Verbatim decomposition sums with explicit periodic indexing.
fn oracle_step(a: &[f64], h: &[f64], g: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut a_next = vec![0.0; n / 2];
    let mut d_next = vec![0.0; n / 2];
    for p in 0..n / 2 {
        for t in 2 * p..2 * p + h.len() {
            a_next[p] += h[t - 2 * p] * a[t % n];
            d_next[p] += g[t - 2 * p] * a[t % n];
        }
    }
    (a_next, d_next)
}

/// Detail channel as inner products with the periodized wavelet at scale 2.
fn oracle_detail_atoms(x: &[f64], g: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut atom = vec![0.0; n];
    for (t, &gt) in g.iter().enumerate() {
        atom[t % n] += gt;
    }
    (0..n / 2)
        .map(|p| {
            (0..n)
                .map(|m| x[m] * atom[(m + n - (2 * p) % n) % n])
                .sum()
        })
        .collect()
}

#[test]
fn criterion_2_oracle_equivalence() {
    // Agreement on every basis vector proves the linear maps are identical;
    // random inputs additionally exercise accumulation order.
    let mut rng = TestRng::new(22);
    let mut worst = 0.0f64;
    for name in ["haar", "db2"] {
        let pair = FilterPair::from_scaling(
            wavelet_learn::filterbank::classical_filter_by_name(name).unwrap(),
        );
        for n in (2..=16).step_by(2) {
            let mut inputs: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    e
                })
                .collect();
            for _ in 0..20 {
                inputs.push(rng.vec(n));
            }
            for x in &inputs {
                let (a, d) = dwt_step(x, &pair).unwrap();
                let (oa, od) = oracle_step(x, pair.h(), pair.g());
                let atoms = oracle_detail_atoms(x, pair.g());
                worst = worst
                    .max(max_abs_diff(&a, &oa))
                    .max(max_abs_diff(&d, &od))
                    .max(max_abs_diff(&d, &atoms));
            }
        }
    }
    let pass = worst < 1e-12;
    report(
        2,
        pass,
        &format!(
            "dwt_step vs verbatim double-loop and periodized-atom oracles, \
             all lengths <= 16, Haar and db2: max deviation {worst:.3e} (< 1e-12)"
        ),
    );
    assert!(pass);
}

// -- criterion 3: gradient correctness ---------------------------------------

#[test]
fn criterion_3_gradient_matches_finite_differences() {
    let started = Instant::now();
    let mut rng = TestRng::new(33);
    let mut worst_smooth = 0.0f64;
    for _ in 0..100 {
        let h = ScalingFilter::new(rng.vec(8)).unwrap();
        let batch: Vec<Signal> = (0..4)
            .map(|_| Signal::new(rng.vec(64)).unwrap())
            .collect();
        let fd = fd_check(&batch, &h, 0.0, 0.5, 3, 1e-6).unwrap();
        worst_smooth = worst_smooth.max(fd.max_rel_error);
    }

    // With the L1 term active, resample until every coefficient is bounded
    // away from zero so central differences stay on one side of the kink.
    let mut worst_l1 = 0.0f64;
    let mut accepted = 0;
    while accepted < 100 {
        let h = ScalingFilter::new(rng.vec(8)).unwrap();
        let batch: Vec<Signal> = (0..4)
            .map(|_| Signal::new(rng.vec(64)).unwrap())
            .collect();
        let pair = FilterPair::from_scaling(h.clone());
        let mut min_coeff = f64::INFINITY;
        for x in &batch {
            let dec = dwt(x, &pair, 3).unwrap();
            for band in dec.details.iter().chain(std::iter::once(&dec.approx)) {
                for v in band {
                    min_coeff = min_coeff.min(v.abs());
                }
            }
        }
        if min_coeff < 1e-3 {
            continue;
        }
        accepted += 1;
        let fd = fd_check(&batch, &h, 0.5, 0.5, 3, 1e-6).unwrap();
        worst_l1 = worst_l1.max(fd.max_rel_error);
    }
    let elapsed = started.elapsed();
    let pass = worst_smooth < 1e-5 && worst_l1 < 1e-4 && elapsed.as_secs_f64() < 60.0;
    report(
        3,
        pass,
        &format!(
            "analytic vs central-difference gradients, 100 draws each: \
             smooth max rel {worst_smooth:.3e} (< 1e-5), \
             L1-active max rel {worst_l1:.3e} (< 1e-4), runtime {elapsed:.2?} (< 60 s)"
        ),
    );
    assert!(pass);
}

// -- criterion 4: constraint-only optimization --------------------------------

#[test]
fn criterion_4_constraint_optimization() {
    let started = Instant::now();
    let mut successes = 0;
    for seed in 0..10u64 {
        let reached = match random_wavelet(20, seed) {
            Ok(h) => wavelet_loss(&h).total < 1e-6,
            Err(wavelet_learn::Error::NoConvergence { residual, .. }) => residual < 1e-6,
            Err(e) => panic!("unexpected error: {e}"),
        };
        if reached {
            successes += 1;
        }
    }
    let elapsed = started.elapsed();
    let pass = successes >= 9 && elapsed.as_secs_f64() < 60.0;
    report(
        4,
        pass,
        &format!(
            "constraint-only Adam (k=20, 10 seeds, <= 10000 steps): \
             {successes}/10 reached L_w < 1e-6 (need >= 9), runtime {elapsed:.2?} (< 60 s)"
        ),
    );
    assert!(pass);
}

// -- criteria 5 and 6: desk-scale autoencoder + structure capture -------------

struct DeskScaleRun {
    initial: f64,
    final_avg: f64,
    constraint_loss: f64,
    elapsed_s: f64,
    final_h: ScalingFilter,
}

/// Both criteria use the same trained filter; train once per process.
fn desk_scale_run() -> &'static DeskScaleRun {
    static RUN: std::sync::OnceLock<DeskScaleRun> = std::sync::OnceLock::new();
    RUN.get_or_init(|| {
        let started = Instant::now();
        let dataset = make_dataset(&SynthConfig {
            base: BaseWave::Sine,
            harmonics: 4,
            inclusion_prob: 0.5,
            signal_len: 256,
            count: 2048,
            cycles: 4,
            seed: 1,
            ..SynthConfig::default()
        })
        .unwrap();
        let config = TrainingConfig {
            filter_len: 20,
            levels: 5,
            lambda1: 0.5,
            lambda2: 0.5,
            batch_size: 32,
            max_steps: 20_000,
            convergence_tol: 1e-6,
            seed: 37,
            ..TrainingConfig::default()
        };
        let history = train(&dataset, &config).unwrap();
        let initial = history.records[0].total_loss;
        let window = config.convergence_window.min(history.records.len());
        let final_avg = history.records[history.records.len() - window..]
            .iter()
            .map(|r| r.total_loss)
            .sum::<f64>()
            / window as f64;
        DeskScaleRun {
            initial,
            final_avg,
            constraint_loss: wavelet_loss(&history.final_h).total,
            elapsed_s: started.elapsed().as_secs_f64(),
            final_h: history.final_h,
        }
    })
}

#[test]
fn criterion_5_desk_scale_training() {
    let run = desk_scale_run();
    let pass = run.final_avg <= 0.2 * run.initial
        && run.constraint_loss < 1e-2
        && run.elapsed_s < 600.0;
    report(
        5,
        pass,
        &format!(
            "desk-scale autoencoder (M=2048, N=256, K=4, J=5, k=20, seed 37): \
             trailing loss {:.3} vs initial {:.3} (ratio {:.3}, need <= 0.2), \
             L_w {:.3e} (< 1e-2), runtime {:.1}s (< 600 s)",
            run.final_avg,
            run.initial,
            run.final_avg / run.initial,
            run.constraint_loss,
            run.elapsed_s
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_structure_capture() {
    let run = desk_scale_run();
    let ortho = validate_orthonormal(&run.final_h, 1e-2);
    let leak_tol = if ortho.is_orthonormal { 1e-10 } else { 1e-3 };
    let pair = FilterPair::from_scaling(run.final_h.clone());
    let mut min_fraction = 1.0f64;
    let mut max_leak = 0.0f64;
    for seed in 0..10u64 {
        let x = sample_signal(&pair, 1024, 6, 0.05, 3, seed).unwrap();
        if x.samples().iter().all(|v| *v == 0.0) {
            continue;
        }
        // Nyquist/8 for N=1024 is bin 64
        min_fraction = min_fraction.min(low_band_fraction(x.samples(), 64));
        let dec = dwt(&x, &pair, 6).unwrap();
        for band in &dec.details[..3] {
            for v in band {
                max_leak = max_leak.max(v.abs());
            }
        }
    }
    let pass = min_fraction > 0.8 && max_leak < leak_tol;
    report(
        6,
        pass,
        &format!(
            "structure capture with the learned filter: min low-band energy fraction \
             {min_fraction:.3} (need > 0.8), max d1-d3 leak after re-transform {max_leak:.3e} \
             (need < {leak_tol:.0e}; filter {} validate_orthonormal at 1e-2)",
            if ortho.is_orthonormal { "passes" } else { "fails" }
        ),
    );
    assert!(
        pass,
        "known red: the re-transform leak tracks the filter's double-shift-orthogonality \
         defect, which the soft constraints do not penalize; see README"
    );
}

// -- criterion 7: distance measure --------------------------------------------

#[test]
fn criterion_7_distance_measure() {
    let mut pass = true;
    let mut detail = String::new();
    let ids = ClassicalWaveletId::all();
    for &id in &ids {
        let h = classical_filter(id);
        let self_distance = filter_distance(h.coeffs(), h.coeffs()).unwrap();
        if self_distance != 0.0 {
            pass = false;
            detail = format!("{id}: self-distance {self_distance:e}");
            break;
        }
        let k = h.len();
        for shift in [1usize, 2, k / 2, k - 1] {
            let shifted: Vec<f64> = (0..k).map(|i| h.coeffs()[(i + k - shift) % k]).collect();
            let d = filter_distance(h.coeffs(), &shifted).unwrap();
            if d > 1e-12 {
                pass = false;
                detail = format!("{id}: shift-{shift} distance {d:e}");
                break;
            }
        }
        let ranking = closest_wavelet(&h);
        let top = ranking[0];
        // sym2/sym3 share their published coefficient tables with db2/db3,
        // so "itself" means the identical coefficient vector; the id must
        // match whenever the table is unique in the database.
        let top_coeffs = classical_filter(top.id);
        let identical = top_coeffs.coeffs() == h.coeffs();
        let duplicate_table = matches!(
            (id.family, id.order),
            (wavelet_learn::filterbank::WaveletFamily::Symlet, 2 | 3)
        );
        let id_ok = top.id == id || (duplicate_table && identical);
        if !(top.distance < 1e-12 && identical && id_ok) {
            pass = false;
            detail = format!("{id}: top match {} at {:e}", top.id, top.distance);
            break;
        }
    }
    if pass {
        detail = "self-distance exactly 0, shift-invariance < 1e-12, and rank-1 self-match \
                  across all 24 database filters"
            .to_string();
    }
    report(7, pass, &detail);
    assert!(pass, "{detail}");
}

// -- criterion 8: cascade sanity ------------------------------------------------

#[test]
fn criterion_8_cascade_sanity() {
    let haar = classical_filter(ClassicalWaveletId::parse("haar").unwrap());
    let (phi, psi) = cascade(&haar, 8);
    let mut worst_haar = 0.0f64;
    for (i, v) in phi.values.iter().enumerate() {
        let t = phi.t(i);
        let expect = if t < 1.0 { 1.0 } else { 0.0 };
        worst_haar = worst_haar.max((v - expect).abs());
    }
    for (i, v) in psi.values.iter().enumerate() {
        let t = psi.t(i);
        let expect = if t < 0.5 {
            1.0
        } else if t < 1.0 {
            -1.0
        } else {
            0.0
        };
        worst_haar = worst_haar.max((v - expect).abs());
    }

    let mut worst_phi = 0.0f64;
    let mut worst_psi = 0.0f64;
    for order in 2..=10 {
        let id = ClassicalWaveletId::new(wavelet_learn::filterbank::WaveletFamily::Daubechies, order)
            .unwrap();
        let (phi, psi) = cascade(&classical_filter(id), 8);
        let int_phi: f64 = phi.values.iter().sum::<f64>() * phi.grid_step;
        let int_psi: f64 = psi.values.iter().sum::<f64>() * psi.grid_step;
        worst_phi = worst_phi.max((int_phi - 1.0).abs());
        worst_psi = worst_psi.max(int_psi.abs());
    }
    let pass = worst_haar < 1e-12 && worst_phi < 0.02 && worst_psi < 0.02;
    report(
        8,
        pass,
        &format!(
            "Haar cascade vs analytic step functions: max dev {worst_haar:.3e} (< 1e-12); \
             db2-db10 at 8 iterations: |int phi - 1| <= {worst_phi:.3e}, \
             |int psi| <= {worst_psi:.3e} (< 0.02)"
        ),
    );
    assert!(pass);
}

// -- criterion 9: CLI reproducibility from manifests ----------------------------

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_wavelearn")
}

fn run_ok(args: &[String]) {
    let out = Command::new(bin()).args(args).output().expect("run binary");
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn s(v: &str) -> String {
    v.to_string()
}

/// Reruns a command from its manifest into a fresh location and returns the
/// list of data files whose bytes must match.
fn rerun_from_manifest(manifest_path: &Path, fresh_out: &Path) -> Vec<(PathBuf, PathBuf)> {
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(manifest_path).unwrap()).unwrap();
    let mut args: Vec<String> = manifest["args"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    args.push(s("--out"));
    args.push(fresh_out.display().to_string());
    run_ok(&args);

    let old_out = PathBuf::from(manifest["out"].as_str().unwrap());
    let outputs: Vec<String> = manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    if old_out.is_dir() {
        outputs
            .iter()
            .map(|name| (old_out.join(name), fresh_out.join(name)))
            .collect()
    } else {
        vec![(old_out.clone(), fresh_out.to_path_buf())]
    }
}

#[test]
fn criterion_9_manifest_reproducibility() {
    let root = std::env::temp_dir().join(format!("wavelearn-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&root);
    std::fs::create_dir_all(&root).unwrap();
    let p = |name: &str| root.join(name).display().to_string();

    // seed inputs
    let wav_path = root.join("tone.wav");
    {
        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: 16_000,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let mut writer = hound::WavWriter::create(&wav_path, spec).unwrap();
        for i in 0..512 {
            writer
                .write_sample(((i as f64 * 0.21).sin() * 9000.0) as i16)
                .unwrap();
        }
        writer.finalize().unwrap();
    }

    // run each command once
    run_ok(&[
        s("synth"), s("--base"), s("sawtooth"), s("--n"), s("64"), s("--m"), s("12"),
        s("--seed"), s("5"), s("--out"), p("data"),
    ]);
    run_ok(&[
        s("train"), s("--dataset"), p("data"), s("--filter-len"), s("6"), s("--levels"), s("3"),
        s("--max-steps"), s("60"), s("--batch-size"), s("4"), s("--seed"), s("2"),
        s("--out"), p("run"),
    ]);
    run_ok(&[
        s("transform"), s("--signal"), p("data/signal_00003.csv"), s("--filter"), s("db3"),
        s("--levels"), s("4"), s("--out"), p("x.coeffs"),
    ]);
    run_ok(&[
        s("reconstruct"), s("--coeffs"), p("x.coeffs"), s("--filter"), s("db3"),
        s("--out"), p("x_back.csv"),
    ]);
    run_ok(&[
        s("cascade"), s("--filter"), p("run/filter.json"), s("--iterations"), s("6"),
        s("--out"), p("functions"),
    ]);
    run_ok(&[s("compare"), s("--filter"), p("run/filter.json"), s("--out"), p("matches.txt")]);
    run_ok(&[
        s("sample"), s("--filter"), s("sym4"), s("--n"), s("256"), s("--levels"), s("4"),
        s("--density"), s("0.1"), s("--zero-top-scales"), s("2"), s("--seed"), s("9"),
        s("--out"), p("generated.csv"),
    ]);
    run_ok(&[
        s("plot"), p("functions/phi.csv"), p("functions/psi.csv"), s("--out"), p("plot.svg"),
    ]);
    run_ok(&[
        s("wav-ingest"), s("--wav"), wav_path.display().to_string(), s("--n"), s("128"),
        s("--hop"), s("128"), s("--out"), p("segments"),
    ]);

    // rerun every command from its manifest and compare data files bytewise
    let manifests = [
        root.join("data/manifest.json"),
        root.join("run/manifest.json"),
        root.join("x.coeffs.manifest.json"),
        root.join("x_back.csv.manifest.json"),
        root.join("functions/manifest.json"),
        root.join("matches.txt.manifest.json"),
        root.join("generated.csv.manifest.json"),
        root.join("plot.svg.manifest.json"),
        root.join("segments/manifest.json"),
    ];
    let mut compared = 0usize;
    for (i, manifest) in manifests.iter().enumerate() {
        assert!(manifest.is_file(), "{manifest:?} missing");
        let fresh = root.join(format!("rerun_{i}"));
        for (old, new) in rerun_from_manifest(manifest, &fresh) {
            let a = std::fs::read(&old).unwrap_or_else(|e| panic!("{old:?}: {e}"));
            let b = std::fs::read(&new).unwrap_or_else(|e| panic!("{new:?}: {e}"));
            assert_eq!(a, b, "{old:?} differs after rerun from manifest");
            compared += 1;
        }
    }
    report(
        9,
        true,
        &format!(
            "all 9 CLI commands rerun from their manifests: {compared} data files \
             byte-identical"
        ),
    );
    std::fs::remove_dir_all(&root).unwrap();
}
