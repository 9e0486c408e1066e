//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the report is always printed.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spin2::dynamics::{decompose, find_poles, inverse_laplace_numeric, series, PoleDecomposition};
use spin2::laplace::{
    equilibrium_joint, equilibrium_sigma, joint_denominator, joint_rational, kernel_form, rational,
    shifted_joint_denominator, sigma_denominator, sigma_z_rational, static_equilibrium_joint,
    static_equilibrium_sigma,
};
use spin2::oracle::{compare_with_analytic, oracle_grid};
use spin2::regimes::{
    classify_poles, crossover_temperatures, decoherence_rate, gamma_sigma_kondo, low_temp_poles_joint,
    low_temp_poles_sigma, sbe_high_temp, slowest_real_rate, symmetric_joint_quartic, PoleStructure, PoleTerm,
};
use spin2::{Complex64, EffectiveParams, Observable};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Generic asymmetric parameters with finite coupling phases.
fn random_params(rng: &mut ChaCha8Rng) -> EffectiveParams {
    EffectiveParams::assemble(
        rng.gen_range(0.2..2.0),
        rng.gen_range(0.2..2.0),
        rng.gen_range(0.0..3.0),
        log_uniform(rng, 0.01, 5.0),
        log_uniform(rng, 0.01, 5.0),
        (PI * rng.gen_range(0.0..0.3)).tan(),
        (PI * rng.gen_range(0.0..0.3)).tan(),
        None,
    )
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn c1_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let eff = random_params(&mut rng);
        let rats: Vec<_> = Observable::ALL.iter().map(|&o| (o, rational(o, &eff))).collect();
        for _ in 0..100 {
            let lam = Complex64::new(rng.gen_range(0.05..5.0), rng.gen_range(-5.0..5.0));
            for (obs, rat) in &rats {
                let a = rat.eval(lam).unwrap();
                let b = kernel_form(*obs, lam, &eff).unwrap();
                worst = worst.max(relative(a, b));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-10 && secs < 10.0,
        format!("max relative error {worst:.2e} over 100x100x3 evaluations in {secs:.2} s"),
    )
}

fn c2_shift() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut odd, mut closed): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let eff = random_params(&mut rng);
        let shifted = joint_denominator(&eff).shift(-(eff.theta1 + eff.theta2) / 2.0);
        let scale = shifted.coeffs().iter().map(|c| c.abs()).fold(0.0, f64::max);
        let display = shifted_joint_denominator(&eff);
        for k in 0..=6 {
            if k % 2 == 1 {
                odd = odd.max(shifted.coeff(k).abs() / scale);
            }
            closed = closed.max((shifted.coeff(k) - display.coeff(k)).abs() / scale);
        }
    }
    outcome(
        odd < 1e-12 && closed < 1e-12,
        format!("max odd coefficient {odd:.2e}, max deviation from the even closed form {closed:.2e}"),
    )
}

fn c3_equilibrium() -> Outcome {
    // The displayed equilibria follow from the λ → 0 kernel ratio once the
    // phase tan(πK) is taken to first order in K, the order of the white-noise
    // limit itself; the deviation with the full phase is reported alongside.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst, mut full_phase): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let (k1, k2, t) = (rng.gen_range(0.01..0.2), rng.gen_range(0.01..0.2), rng.gen_range(0.1..3.0));
        let linear = EffectiveParams::assemble(
            rng.gen_range(0.2..2.0),
            rng.gen_range(0.2..2.0),
            rng.gen_range(0.0..2.0),
            2.0 * PI * k1 * t,
            2.0 * PI * k2 * t,
            PI * k1,
            PI * k2,
            Some(t),
        );
        let pairs = [
            (static_equilibrium_sigma(&linear).unwrap(), equilibrium_sigma(&linear).unwrap()),
            (static_equilibrium_joint(&linear).unwrap(), equilibrium_joint(&linear).unwrap()),
        ];
        for (a, b) in pairs {
            worst = worst.max((a - b).abs());
        }
        let exact = EffectiveParams {
            tan_k1: (PI * k1).tan(),
            tan_k2: (PI * k2).tan(),
            ..linear
        };
        let b = equilibrium_joint(&exact).unwrap();
        if b != 0.0 {
            full_phase = full_phase.max((static_equilibrium_joint(&exact).unwrap() / b - 1.0).abs());
        }
    }
    let k = 0.05;
    let reference = EffectiveParams::assemble(1.0, 1.0, 0.5, 2.0 * PI * k, 2.0 * PI * k, PI * k, PI * k, Some(1.0));
    let displayed = equilibrium_joint(&reference).unwrap();
    let from_kernels = static_equilibrium_joint(&reference).unwrap();
    outcome(
        worst < 1e-12 && displayed == 0.25 && (from_kernels - 0.25).abs() < 1e-12,
        format!(
            "max |kernel limit - displayed| {worst:.2e}; v=0.5, T=1: {displayed} (kernel limit {from_kernels:.15}); \
             with the full phase tan(πK) the joint limit deviates by up to {:.2}%",
            100.0 * full_phase
        ),
    )
}

fn match_error(found: &[Complex64], expected: &[Complex64]) -> f64 {
    let mut remaining = expected.to_vec();
    let mut worst: f64 = 0.0;
    for z in found {
        let (k, d) = remaining
            .iter()
            .enumerate()
            .map(|(k, w)| (k, (z - w).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        worst = worst.max(d);
        remaining.remove(k);
    }
    worst
}

fn c4_free_limit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let i = Complex64::i();
    let (mut sigma, mut joint): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let eff = EffectiveParams::assemble(
            rng.gen_range(0.2..2.0),
            rng.gen_range(0.2..2.0),
            rng.gen_range(0.0..3.0),
            0.0,
            0.0,
            0.0,
            0.0,
            None,
        );
        let (o, d, op, om) = (eff.bar_omega, eff.bar_small_delta, eff.bar_omega_plus, eff.bar_omega_minus);
        let s = find_poles(&sigma_denominator(&eff)).unwrap();
        sigma = sigma.max(match_error(&s, &[i * o, -i * o, i * d, -i * d]));
        let j = find_poles(&joint_denominator(&eff)).unwrap();
        let zero = Complex64::new(0.0, 0.0);
        joint = joint.max(match_error(&j, &[i * op, -i * op, i * om, -i * om, zero, zero]));
    }
    outcome(
        sigma < 1e-10 && joint < 1e-10,
        format!("max pole error σz {sigma:.2e}, σzτz {joint:.2e}"),
    )
}

fn c5_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let draws: Vec<EffectiveParams> = (0..100)
        .map(|_| {
            let bar = rng.gen_range(0.5..2.0);
            EffectiveParams::assemble(
                bar,
                bar * rng.gen_range(0.5..1.5),
                bar * rng.gen_range(0.0..5.0),
                bar * log_uniform(&mut rng, 0.01, 30.0),
                bar * log_uniform(&mut rng, 0.01, 30.0),
                (PI * rng.gen_range(0.0..0.3)).tan(),
                (PI * rng.gen_range(0.0..0.3)).tan(),
                None,
            )
        })
        .collect();
    let mut worst = (0.0, String::new());
    let mut errors = Vec::new();
    for (k, eff) in draws.iter().enumerate() {
        match compare_with_analytic(eff, &oracle_grid(eff, 501)) {
            Ok(r) if r.worst.max_abs > worst.0 => {
                worst = (
                    r.worst.max_abs,
                    format!("draw {k}, {} at t = {:.3}", r.worst.observable, r.worst.time),
                )
            }
            Ok(_) => {}
            Err(e) => errors.push(format!("draw {k}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        errors.is_empty() && worst.0 < 1e-6 && secs < 60.0,
        format!(
            "max deviation {:.2e} ({}) in {secs:.1} s; errors: {}",
            worst.0,
            worst.1,
            if errors.is_empty() { "none".to_string() } else { errors.join("; ") }
        ),
    )
}

fn c6_inversion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst, mut compared, mut refused) = (0.0f64, 0, 0);
    for _ in 0..20 {
        let eff = random_params(&mut rng);
        let times = oracle_grid(&eff, 41);
        for obs in Observable::ALL {
            let rat = rational(obs, &eff);
            let Ok(dec) = decompose(&rat) else {
                refused += 1;
                continue;
            };
            let poles = series(&dec, &times).unwrap();
            let contour = inverse_laplace_numeric(&rat, &times).unwrap();
            worst = worst.max(poles.max_abs_difference(&contour).0);
            compared += 1;
        }
    }
    outcome(
        worst < 1e-8 && refused == 0,
        format!("max |pole sum - contour| {worst:.2e} over {compared} trajectories ({refused} refused)"),
    )
}

fn c7_sum_rules() -> Outcome {
    // ΣAλ is a frequency; it is measured in units of the largest pole modulus.
    let (mut value, mut slope, mut slope_abs) = (0.0f64, 0.0f64, 0.0f64);
    let (mut points, mut refused) = (0, 0);
    for &(bar2, v, tan) in &[(1.0, 0.5, 0.0), (1.5, 0.8, 0.16), (0.7, 2.0, 0.3), (1.0, 0.0, 0.1)] {
        for k in 0..60 {
            let theta = 0.02 * 1.12f64.powi(k);
            let eff = EffectiveParams::assemble(1.0, bar2, v, theta, 0.7 * theta, tan, 0.5 * tan, None);
            for obs in Observable::ALL {
                match decompose(&rational(obs, &eff)) {
                    Ok(dec) => {
                        let scale = dec.poles.iter().map(|p| p.norm()).fold(0.0, f64::max);
                        value = value.max((dec.initial_value() - 1.0).abs());
                        slope = slope.max(dec.initial_slope().abs() / scale);
                        slope_abs = slope_abs.max(dec.initial_slope().abs());
                        points += 1;
                    }
                    Err(_) => refused += 1,
                }
            }
        }
    }
    outcome(
        value < 1e-10 && slope < 1e-10,
        format!(
            "max |ΣA + eq - 1| {value:.2e}, max |ΣAλ|/max|λ| {slope:.2e} (absolute {slope_abs:.2e}) \
             over {points} decompositions ({refused} refused as degenerate)"
        ),
    )
}

fn c8_kondo_scaling() -> Outcome {
    let n = 20;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut formula: f64 = 0.0;
    for k in 0..n {
        let theta = 10.0 * 10f64.powf(k as f64 / (n - 1) as f64);
        let eff = EffectiveParams::symmetric(1.0, 0.5, theta, 0.0);
        let rate = slowest_real_rate(&sigma_denominator(&eff)).unwrap().unwrap();
        formula = formula.max(gamma_sigma_kondo(&eff).unwrap().relative_deviation.unwrap());
        xs.push(theta.ln());
        ys.push(rate.ln());
    }
    let (mx, my) = (xs.iter().sum::<f64>() / n as f64, ys.iter().sum::<f64>() / n as f64);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    outcome(
        (slope + 1.0).abs() < 0.05,
        format!("log-log slope {slope:.4}; Δ̄²/ϑ within {:.2}% of the exact rate", 100.0 * formula),
    )
}

/// Pairs each approximate pole with the nearest exact one.
fn nearest(term: &PoleTerm, dec: &PoleDecomposition) -> (Complex64, Complex64) {
    let (k, _) = dec
        .poles
        .iter()
        .enumerate()
        .map(|(k, p)| (k, (p - term.pole).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    (dec.poles[k], dec.amplitudes[k])
}

fn c9_low_temperature() -> Outcome {
    // Small ϑ comes from small K at T = 1, as in the white-noise window; the
    // equilibrium entering the relaxation amplitudes then stays of order v/2T.
    let h = 1e-4;
    let temperature = 1.0;
    let base = EffectiveParams::assemble(1.0, 1.5, 0.5, 0.0, 0.0, 0.0, 0.0, Some(temperature));
    let at = |t1: f64, t2: f64| EffectiveParams {
        tan_k1: (t1 / (2.0 * temperature)).tan(),
        tan_k2: (t2 / (2.0 * temperature)).tan(),
        ..base.with_thetas(t1, t2)
    };
    let (mut slope_err, mut amp_err): (f64, f64) = (0.0, 0.0);
    // d Re λ / dϑζ from the exact poles at ϑζ = h, compared with the formulas
    // evaluated at unit ϑζ (they are linear in ϑ).
    for (t1, t2) in [(1.0, 0.0), (0.0, 1.0), (1.0, 0.6)] {
        let probe = at(h * t1, h * t2);
        let unit = base.with_thetas(t1, t2);
        let sigma = decompose(&sigma_z_rational(&probe)).unwrap();
        for (term, coeff) in low_temp_poles_sigma(&probe).iter().zip(low_temp_poles_sigma(&unit)) {
            let (pole, amp) = nearest(term, &sigma);
            slope_err = slope_err.max(((pole.re / h) / coeff.pole.re - 1.0).abs());
            amp_err = amp_err.max((amp - term.amplitude).norm());
        }
        let joint = decompose(&joint_rational(&probe)).unwrap();
        let terms = low_temp_poles_joint(&probe).unwrap();
        let coeffs = low_temp_poles_joint(&unit).unwrap();
        for (term, coeff) in terms.iter().zip(&coeffs) {
            let (pole, amp) = nearest(term, &joint);
            slope_err = slope_err.max(((pole.re / h) / coeff.pole.re - 1.0).abs());
            amp_err = amp_err.max((amp - term.amplitude).norm());
        }
    }
    outcome(
        slope_err < 0.01 && amp_err < 1e-3,
        format!("max relative slope error {slope_err:.2e}, max amplitude error {amp_err:.2e}"),
    )
}

fn c10_symmetric_reduction() -> Outcome {
    let (mut roots, mut residue): (f64, f64) = (0.0, 0.0);
    for &(theta, v) in &[(0.5, 0.5), (0.2, 0.3), (1.5, 0.5), (5.0, 0.8), (0.8, 2.0)] {
        let eff = EffectiveParams::symmetric(1.0, v, theta, 0.0);
        let quartic = find_poles(&symmetric_joint_quartic(&eff).unwrap()).unwrap();
        let sextic = decompose(&joint_rational(&eff)).unwrap();
        let mut rest: Vec<_> = sextic.poles.iter().copied().zip(sextic.amplitudes.iter().copied()).collect();
        for q in &quartic {
            let (k, d) = rest
                .iter()
                .enumerate()
                .map(|(k, (p, _))| (k, (p - q).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            roots = roots.max(d);
            rest.remove(k);
        }
        for (_, a) in rest {
            residue = residue.max(a.norm());
        }
    }
    outcome(
        roots < 1e-10 && residue < 1e-10,
        format!("max quartic/sextic root mismatch {roots:.2e}, max residue of the two excess poles {residue:.2e}"),
    )
}

fn c11_spin_boson_environment() -> Outcome {
    // The complex-pair residues acquire an imaginary part of first order in γτ
    // (a sine term the leading-order display omits), so the amplitude error
    // halves rather than quarters; the real-part error is shown for contrast.
    let mut pole_errs = Vec::new();
    let mut amp_errs = Vec::new();
    let mut amp_re_errs = Vec::new();
    for theta2 in [50.0, 100.0, 200.0] {
        let eff = EffectiveParams::assemble(1.0, 1.5, 0.8, 0.0, theta2, 0.0, 0.0, None);
        let sbe = sbe_high_temp(&eff).unwrap();
        let (mut pe, mut ae, mut re): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for term in &sbe.leading {
            let (pole, amp) = nearest(term, &sbe.exact);
            pe = pe.max((pole - term.pole).norm());
            ae = ae.max((amp - term.amplitude).norm());
            re = re.max((amp.re - term.amplitude.re).abs());
        }
        pole_errs.push(pe);
        amp_errs.push(ae);
        amp_re_errs.push(re);
    }
    let ratios = |e: &[f64]| [e[0] / e[1], e[1] / e[2]];
    let (pr, ar, rr) = (ratios(&pole_errs), ratios(&amp_errs), ratios(&amp_re_errs));
    let quadratic = |r: [f64; 2]| r.iter().all(|x| (x - 4.0).abs() < 0.5);

    let mut dec_errs = Vec::new();
    for v in [0.05, 0.025, 0.0125] {
        let eff = EffectiveParams::assemble(1.0, 1.5, v, 0.0, 0.4, 0.0, 0.0, None);
        let r = decoherence_rate(&eff).unwrap();
        dec_errs.push(r.relative_deviation.unwrap());
    }
    let dr = ratios(&dec_errs);
    outcome(
        quadratic(pr) && quadratic(ar) && quadratic(dr),
        format!(
            "pole error ratios {:.2}/{:.2}, amplitude error ratios {:.2}/{:.2} (real parts {:.2}/{:.2}) under γτ halving; \
             γ_dec |ratio-1| = {:.2e}, {:.2e}, {:.2e} (ratios {:.2}/{:.2} under v halving)",
            pr[0], pr[1], ar[0], ar[1], rr[0], rr[1], dec_errs[0], dec_errs[1], dec_errs[2], dr[0], dr[1]
        ),
    )
}

fn c12_figure_structure() -> Outcome {
    let mut sequence: Vec<PoleStructure> = Vec::new();
    for k in 0..=400 {
        let theta = 0.01 * 3000f64.powf(k as f64 / 400.0);
        let eff = EffectiveParams::symmetric(1.0, 0.5, theta, 0.0);
        let class = classify_poles(&find_poles(&sigma_denominator(&eff)).unwrap());
        if sequence.last() != Some(&class) {
            sequence.push(class);
        }
    }
    let expected = [
        PoleStructure::TwoOscillations,
        PoleStructure::OneOscillationSplitDecrements,
        PoleStructure::IncoherentFourReal,
        PoleStructure::Kondo,
    ];
    let theta = 20.0;
    let kondo = find_poles(&sigma_denominator(&EffectiveParams::symmetric(1.0, 0.5, theta, 0.0))).unwrap();
    let mut real: Vec<f64> = kondo.iter().filter(|z| z.im == 0.0).map(|z| -z.re).collect();
    real.sort_by(f64::total_cmp);
    let slow = real.first().map_or(f64::NAN, |r| r / (1.0 / theta) - 1.0);
    let fast = real.last().map_or(f64::NAN, |r| r / (2.0 * theta) - 1.0);
    let single = crossover_temperatures(&EffectiveParams::symmetric(1.0, 0.8, 1.0, 0.0)).unwrap();
    outcome(
        sequence == expected && slow.abs() < 0.05 && fast.abs() < 0.05 && single.single_crossover,
        format!(
            "structure sequence {}; at ϑ = 20 rates deviate from Δ̄²/ϑ by {:.2}% and from 2ϑ by {:.2}%; v = 0.8 crossovers {:?}",
            sequence.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" > "),
            100.0 * slow,
            100.0 * fast,
            single.crossovers.values()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("kernel and rational forms agree", c1_identity),
        ("shifted sextic is even", c2_shift),
        ("equilibrium values", c3_equilibrium),
        ("free-limit poles", c4_free_limit),
        ("master-equation oracle", c5_oracle),
        ("contour inversion cross-check", c6_inversion),
        ("sum rules", c7_sum_rules),
        ("Kondo scaling", c8_kondo_scaling),
        ("low-temperature expansion", c9_low_temperature),
        ("symmetric reduction", c10_symmetric_reduction),
        ("spin-boson environment", c11_spin_boson_environment),
        ("pole-structure sequence", c12_figure_structure),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!("criterion {:>2} {} {}: {}", k + 1, if o.passed { "PASS" } else { "FAIL" }, name, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
