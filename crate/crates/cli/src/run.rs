//! Subcommand implementations. Each sweep point is computed independently;
//! results are assembled in sweep order.

use std::collections::BTreeSet;

use anyhow::{Context, Result};
use rayon::prelude::*;
use spin2::dynamics::{decompose, find_poles, series_or_numeric, spectrum};
use spin2::laplace::rational;
use spin2::oracle::compare_with_analytic;
use spin2::regimes::{crossover_temperatures, decoherence_rate, sbe_high_temp, structured_bath_spectrum, Crossovers};
use spin2::{validate_regime, Complex64, EffectiveParams, Error, Observable};

use crate::config::{Command, Params, RunConfig};
use crate::output::{Cell, Report, Table};

pub struct Outcome {
    pub report: Report,
    /// Set when the oracle comparison exceeded its tolerance.
    pub oracle_failed: bool,
}

struct Point {
    table: Table,
    failed: bool,
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    let points = config.points()?;
    warn_regime(&points);
    let results: Vec<Point> = points
        .par_iter()
        .map(|(x, params)| {
            let point = evaluate(config, params).with_context(|| match (x, &config.sweep) {
                (Some(x), Some(s)) => format!("{} at {} = {x}", command_name(config.command), s.variable),
                _ => command_name(config.command).to_string(),
            })?;
            Ok(match (x, &config.sweep) {
                (Some(x), Some(s)) => Point {
                    table: point.table.with_leading(&s.variable, *x),
                    failed: point.failed,
                },
                _ => point,
            })
        })
        .collect::<Result<_>>()?;

    let oracle_failed = results.iter().any(|p| p.failed);
    let table = Table::concat(results.into_iter().map(|p| p.table).collect());
    let notes = match config.command {
        Command::Spectrum => vec![
            "re_<observable>(-i*omega) is Re F(lambda = -i*omega) of the Laplace-space solution; \
             the equilibrium pole at lambda = 0 is removed first"
                .to_string(),
        ],
        Command::Oracle => vec!["oracle runs in the pure dephasing limit tan(pi*K) = 0".to_string()],
        _ => Vec::new(),
    };
    Ok(Outcome {
        report: Report { table, notes },
        oracle_failed,
    })
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Evolve => "evolve",
        Command::Poles => "poles",
        Command::Spectrum => "spectrum",
        Command::Regimes => "regimes",
        Command::Sbe => "sbe",
        Command::Oracle => "oracle",
    }
}

/// Prints each distinct regime warning for bare parameters once.
fn warn_regime(points: &[(Option<f64>, Params)]) {
    let messages: BTreeSet<String> = points
        .iter()
        .filter_map(|(_, p)| match p {
            Params::Bare(m) => Some(validate_regime(m)),
            Params::Effective(_) => None,
        })
        .flatten()
        .map(|w| w.to_string())
        .collect();
    for m in messages {
        eprintln!("warning: {m}");
    }
}

fn evaluate(config: &RunConfig, params: &Params) -> Result<Point> {
    let eff = params.effective()?;
    let table = match config.command {
        Command::Evolve => evolve(&eff, config)?,
        Command::Poles => poles(&eff, &config.observables)?,
        Command::Spectrum => fourier(&eff, config)?,
        Command::Regimes => regimes(&eff)?,
        Command::Sbe => sbe(&eff, config)?,
        Command::Oracle => return oracle(&eff, config),
    };
    Ok(Point { table, failed: false })
}

fn evolve(eff: &EffectiveParams, config: &RunConfig) -> Result<Table> {
    let times = config.times.values();
    let series = config
        .observables
        .iter()
        .map(|&o| series_or_numeric(&rational(o, eff), &times))
        .collect::<spin2::Result<Vec<_>>>()?;
    let mut table = Table::new(std::iter::once("t").chain(config.observables.iter().map(|o| o.name())));
    for (k, &t) in times.iter().enumerate() {
        table.push(std::iter::once(Cell::Num(t)).chain(series.iter().map(|s| Cell::Num(s.values[k]))).collect());
    }
    Ok(table)
}

/// Upper half plane first, then by decreasing real part.
fn pole_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    b.im.total_cmp(&a.im).then(b.re.total_cmp(&a.re))
}

fn poles(eff: &EffectiveParams, observables: &[Observable]) -> Result<Table> {
    let mut table = Table::new(["observable", "index", "re", "im", "amplitude_re", "amplitude_im", "equilibrium"]);
    for &o in observables {
        let rat = rational(o, eff);
        let (mut entries, equilibrium) = match decompose(&rat) {
            Ok(dec) => (
                dec.poles.iter().zip(&dec.amplitudes).map(|(p, a)| (*p, Some(*a))).collect::<Vec<_>>(),
                Some(dec.equilibrium),
            ),
            // amplitudes are undefined at a pole collision; the poles still are
            Err(Error::DegeneratePoles { .. }) => {
                (find_poles(&rat.denominator)?.into_iter().map(|p| (p, None)).collect(), None)
            }
            Err(e) => return Err(e.into()),
        };
        entries.sort_by(|a, b| pole_order(&a.0, &b.0));
        for (i, (p, a)) in entries.into_iter().enumerate() {
            table.push(vec![
                o.name().into(),
                Cell::Num(i as f64),
                p.re.into(),
                p.im.into(),
                a.map(|a| a.re).into(),
                a.map(|a| a.im).into(),
                equilibrium.into(),
            ]);
        }
    }
    Ok(table)
}

fn fourier(eff: &EffectiveParams, config: &RunConfig) -> Result<Table> {
    let omegas = config.omegas.values();
    let spectra = config
        .observables
        .iter()
        .map(|&o| spectrum(&rational(o, eff), &omegas))
        .collect::<spin2::Result<Vec<_>>>()?;
    let names: Vec<String> = config.observables.iter().map(|o| format!("re_{}(-i*omega)", o.name())).collect();
    let mut table = Table::new(std::iter::once("omega".to_string()).chain(names));
    for (k, &w) in omegas.iter().enumerate() {
        table.push(std::iter::once(Cell::Num(w)).chain(spectra.iter().map(|s| Cell::Num(s.values[k]))).collect());
    }
    Ok(table)
}

fn regimes(eff: &EffectiveParams) -> Result<Table> {
    let report = crossover_temperatures(eff)?;
    let mut table = Table::new([
        "theta",
        "classification",
        "crossovers",
        "crossover_1",
        "crossover_2",
        "crossover_3",
        "v_critical",
    ]);
    let kind = match report.crossovers {
        Crossovers::Three { .. } => "three",
        Crossovers::Single { .. } => "single",
    };
    let values = report.crossovers.values();
    table.push(vec![
        report.theta.into(),
        report.classification.to_string().as_str().into(),
        kind.into(),
        values.first().copied().into(),
        values.get(1).copied().into(),
        values.get(2).copied().into(),
        report.v_critical.into(),
    ]);
    Ok(table)
}

fn sbe(eff: &EffectiveParams, config: &RunConfig) -> Result<Table> {
    let analysis = sbe_high_temp(eff)?;
    let dec = decoherence_rate(eff)?;
    let mut table = Table::new(["quantity", "index", "omega", "value_re", "value_im", "exact_re", "exact_im"]);
    let empty = || Cell::Empty;
    table.push(vec![
        "gamma_tau".into(),
        empty(),
        empty(),
        analysis.gamma_tau.into(),
        empty(),
        empty(),
        empty(),
    ]);
    for (i, term) in analysis.leading.iter().enumerate() {
        // pair each leading-order pole with the nearest exact one
        let nearest = analysis
            .exact
            .poles
            .iter()
            .zip(&analysis.exact.amplitudes)
            .min_by(|a, b| (a.0 - term.pole).norm().total_cmp(&(b.0 - term.pole).norm()));
        let (p, a) = nearest.map_or((None, None), |(p, a)| (Some(*p), Some(*a)));
        for (name, lead, exact) in [("pole", term.pole, p), ("amplitude", term.amplitude, a)] {
            table.push(vec![
                name.into(),
                Cell::Num(i as f64),
                empty(),
                lead.re.into(),
                lead.im.into(),
                exact.map(|z| z.re).into(),
                exact.map(|z| z.im).into(),
            ]);
        }
    }
    table.push(vec![
        "gamma_dec".into(),
        empty(),
        empty(),
        dec.rate.into(),
        empty(),
        dec.exact.into(),
        empty(),
    ]);
    for w in config.omegas.values() {
        table.push(vec![
            "bath_spectrum".into(),
            empty(),
            w.into(),
            structured_bath_spectrum(w, eff).into(),
            empty(),
            empty(),
            empty(),
        ]);
    }
    Ok(table)
}

fn oracle(eff: &EffectiveParams, config: &RunConfig) -> Result<Point> {
    let report = compare_with_analytic(eff, &config.times.values())?;
    let mut table = Table::new(["observable", "max_abs_deviation", "time", "tolerance", "status"]);
    for d in report.deviations.iter().filter(|d| config.observables.contains(&d.observable)) {
        let ok = d.max_abs < report.tolerance;
        table.push(vec![
            d.observable.name().into(),
            d.max_abs.into(),
            d.time.into(),
            report.tolerance.into(),
            if ok { "pass" } else { "fail" }.into(),
        ]);
    }
    let failed = table.rows.iter().any(|r| r[4] == Cell::from("fail"));
    Ok(Point { table, failed })
}
