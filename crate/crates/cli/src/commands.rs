//! The five subcommand implementations. Each returns a `Report`; the
//! caller renders it and derives the exit code.

use qswitch_core::invariants::{
    bargmann_cycle_expectation, bargmann_product_trace, bargmann_pure_chain, InvariantValue,
    StateTuple,
};
use qswitch_core::linalg::PureState;
use qswitch_core::perm::{
    conjugator_to, cycle_shift, format_cycles, main_family_word, pairs_from_permutation,
    parse_permutation, preprocess_perm, swap_layer_a, swap_layer_b, alt_family, lemma5_step,
    verify_commutator_identity, verify_conjugacy, Parity, Permutation,
};
use qswitch_core::protocol::{
    nogo_witness, sample_protocol, simulate_switch_hadamard, EvenStrategy, Family, ProtocolSpec,
};
use qswitch_core::{Error, SIZE_CAP, TOL_DERIVED};

use crate::report::{
    CheckEntry, EstimateBlock, NogoBlock, PermEntry, QueryEntry, Report, ResidualEntry,
    SimulationBlock, ValueEntry,
};
use crate::states;

fn value_entry(v: &InvariantValue, tolerance: f64) -> ValueEntry {
    ValueEntry {
        method: v.method.name(),
        order: v.order,
        value: [v.value.re, v.value.im],
        tolerance,
    }
}

fn push_residuals(report: &mut Report) {
    for i in 0..report.values.len() {
        for j in i + 1..report.values.len() {
            let a = &report.values[i];
            let b = &report.values[j];
            let dr = a.value[0] - b.value[0];
            let di = a.value[1] - b.value[1];
            let residual = (dr * dr + di * di).sqrt();
            let tolerance = a.tolerance.max(b.tolerance);
            report.residuals.push(ResidualEntry {
                between: [a.method, b.method],
                residual,
                tolerance,
                pass: residual <= tolerance,
            });
        }
    }
}

pub fn cmd_invariant(t: &StateTuple, mut report: Report) -> Result<Report, Error> {
    report
        .values
        .push(value_entry(&bargmann_product_trace(t)?, TOL_DERIVED));
    if t.all_pure() {
        report
            .values
            .push(value_entry(&bargmann_pure_chain(t)?, TOL_DERIVED));
    }
    if t.local_dim().checked_pow(t.n() as u32).is_some_and(|d| d <= SIZE_CAP) {
        report
            .values
            .push(value_entry(&bargmann_cycle_expectation(t)?, TOL_DERIVED));
    }
    push_residuals(&mut report);
    Ok(report)
}

pub struct ProtocolArgs {
    pub family: Family,
    pub shots: u64,
    pub seed: u64,
    pub even_strategy: Option<EvenStrategy>,
}

pub fn cmd_protocol(
    t: &StateTuple,
    args: &ProtocolArgs,
    mut report: Report,
) -> Result<Report, Error> {
    let even_strategy = if t.n() % 2 == 0 { args.even_strategy } else { None };
    let spec = ProtocolSpec {
        n: t.n(),
        local_dim: t.local_dim(),
        family: args.family,
        even_strategy,
        shots: args.shots,
        seed: args.seed,
    }
    .validated()?;

    let oracle = bargmann_product_trace(t)?;
    report.values.push(value_entry(&oracle, TOL_DERIVED));

    let est = sample_protocol(t, &spec).map_err(|e| {
        if matches!(e, Error::SizeCap { .. }) {
            eprintln!(
                "hint: the switch register exceeds the size cap; \
                 `qswitch invariant` computes the same value by the product-trace \
                 method without building it"
            );
        }
        e
    })?;
    report.estimate = Some(EstimateBlock {
        p_minus: est.p_minus,
        p_minus_i: est.p_minus_i,
        value: [est.re_estimate, est.im_estimate],
        stderr_re: est.stderr_re,
        stderr_im: est.stderr_im,
        shots_x: est.shots_x,
        shots_y: est.shots_y,
        exact: est.exact,
    });
    if est.exact {
        let dr = est.re_estimate - oracle.value.re;
        let di = est.im_estimate - oracle.value.im;
        let residual = (dr * dr + di * di).sqrt();
        report.checks.push(CheckEntry {
            name: "switch protocol matches product-trace oracle".into(),
            pass: residual <= TOL_DERIVED,
            residual: Some(residual),
            detail: None,
        });
    }
    Ok(report)
}

pub fn cmd_simulate_switch(
    file: Option<&str>,
    dim: usize,
    seed: u64,
    mut report: Report,
) -> Result<Report, Error> {
    use qswitch_core::linalg::{
        haar_random_state, haar_random_unitary, UnitaryMatrix,
    };

    let (a, b, psi) = match file {
        Some(text) => {
            let parsed = states::parse_state_file(text)?;
            let mut unitaries = Vec::new();
            let mut psi = None;
            for (i, entry) in parsed.states.iter().enumerate() {
                match entry {
                    states::StateEntry::Matrix(rows) => {
                        let m = states::entry_matrix(rows, i + 1)?;
                        unitaries.push(UnitaryMatrix::new(m)?);
                    }
                    states::StateEntry::Vector(v) => {
                        let amps = v.iter().map(|&[re, im]| qswitch_core::linalg::C64::new(re, im));
                        psi = Some(PureState::new(amps.collect())?);
                    }
                }
            }
            if unitaries.len() != 2 {
                return Err(Error::invalid_input(format!(
                    "simulate-switch needs exactly two matrix entries (A and B), found {}",
                    unitaries.len()
                )));
            }
            let b = unitaries.pop().expect("two entries");
            let a = unitaries.pop().expect("two entries");
            let psi = match psi {
                Some(p) => p,
                None => PureState::basis(parsed.local_dim, 0),
            };
            (a, b, psi)
        }
        None => (
            haar_random_unitary(seed, dim)?,
            haar_random_unitary(seed.wrapping_add(1), dim)?,
            haar_random_state(seed.wrapping_add(2), dim)?,
        ),
    };

    let (_, sim) = simulate_switch_hadamard(&a, &b, &psi)?;
    report.simulation = Some(SimulationBlock {
        max_deviation: sim.max_deviation,
        tolerance: TOL_DERIVED,
        queries_a: QueryEntry {
            forward: sim.queries_a.forward,
            inverse: sim.queries_a.inverse,
            expanded: sim.queries_a.expanded,
        },
        queries_b: QueryEntry {
            forward: sim.queries_b.forward,
            inverse: sim.queries_b.inverse,
            expanded: sim.queries_b.expanded,
        },
    });
    report.checks.push(CheckEntry {
        name: "simulated switch matches direct switch output".into(),
        pass: sim.max_deviation <= TOL_DERIVED,
        residual: Some(sim.max_deviation),
        detail: None,
    });
    Ok(report)
}

pub struct VerifyArgs {
    pub symbolic_max: usize,
    pub numeric_max: usize,
    pub dim: usize,
    pub lemma5_max: usize,
    pub nogo: Option<usize>,
    pub trials: usize,
    pub seed: u64,
}

pub fn cmd_verify(args: &VerifyArgs, mut report: Report) -> Result<Report, Error> {
    for n in (3..=args.symbolic_max).step_by(2) {
        report.checks.push(CheckEntry {
            name: format!("main-family conjugacy, n = {n}"),
            pass: verify_conjugacy(n)?,
            residual: None,
            detail: None,
        });
        report.checks.push(CheckEntry {
            name: format!("alt-family commutator identity, n = {n}"),
            pass: verify_commutator_identity(n)?,
            residual: None,
            detail: None,
        });
    }

    for n in (3..=args.numeric_max).step_by(2) {
        for family in [Family::Main, Family::Alt] {
            let t = states::random_tuple(n, args.dim, args.seed ^ (n as u64) << 8, false)?;
            let oracle = bargmann_pure_chain(&t)?.value;
            let spec = ProtocolSpec::exact(n, args.dim, family)?;
            let est = sample_protocol(&t, &spec)?;
            let dr = est.re_estimate - oracle.re;
            let di = est.im_estimate - oracle.im;
            let residual = (dr * dr + di * di).sqrt();
            report.checks.push(CheckEntry {
                name: format!("{family:?} family protocol vs oracle, n = {n}, d = {}", args.dim),
                pass: residual <= TOL_DERIVED,
                residual: Some(residual),
                detail: None,
            });
        }
    }

    for n in (5..=args.lemma5_max.saturating_sub(2)).step_by(2) {
        let stepped = lemma5_step(&pairs_from_permutation(&main_family_word(n)?))?;
        let direct = pairs_from_permutation(&main_family_word(n + 2)?);
        report.checks.push(CheckEntry {
            name: format!("pair-set recursion, n = {n} -> {}", n + 2),
            pass: stepped == direct,
            residual: None,
            detail: None,
        });
    }

    if let Some(n) = args.nogo {
        let w = nogo_witness(n, args.dim, args.trials, args.seed)?;
        report.checks.push(CheckEntry {
            name: format!("cycle parity odd, n = {n}"),
            pass: w.cycle_parity_odd,
            residual: None,
            detail: None,
        });
        if let (Some(t), Some(s)) = (w.exhaustive_triples, w.exhaustive_solutions) {
            report.checks.push(CheckEntry {
                name: format!("exhaustive search empty over {t} triples"),
                pass: s == 0,
                residual: None,
                detail: Some(format!("{s} solutions")),
            });
        }
        if w.trials > 0 {
            report.checks.push(CheckEntry {
                name: format!("conjugation right side has determinant 1 ({} trials)", w.trials),
                pass: w.max_det_deviation <= 1e-9,
                residual: Some(w.max_det_deviation),
                detail: None,
            });
        }
        report.nogo = Some(NogoBlock {
            n: w.n,
            local_dim: w.local_dim,
            cycle_parity_odd: w.cycle_parity_odd,
            exhaustive_triples: w.exhaustive_triples,
            exhaustive_solutions: w.exhaustive_solutions,
            trials: w.trials,
            max_det_deviation: w.max_det_deviation,
            cycle_det_sign: w.cycle_det_sign,
            determinant_obstruction_vanishes: w.determinant_obstruction_vanishes,
        });
    }
    Ok(report)
}

fn perm_entry(label: impl Into<String>, p: &Permutation) -> PermEntry {
    PermEntry {
        label: label.into(),
        one_line: p.one_line(),
        cycles: format_cycles(p),
        parity: match p.parity() {
            Parity::Even => "even",
            Parity::Odd => "odd",
        },
    }
}

/// Largest point named in either notation; the inferred group size.
fn max_label(s: &str) -> usize {
    s.split(|c: char| !c.is_ascii_digit())
        .filter_map(|t| t.parse::<usize>().ok())
        .max()
        .unwrap_or(1)
}

/// Parses a permutation onto a domain of at least `n` points, padding
/// one-line notation with fixed points as needed.
fn parse_sized(s: &str, n: usize) -> Result<Permutation, Error> {
    if s.trim_start().starts_with('[') {
        let p = parse_permutation(s, None)?;
        if p.n() >= n {
            return Ok(p);
        }
        let mut images = p.one_line();
        images.extend(p.n() + 1..=n);
        Permutation::from_one_line(&images)
    } else {
        parse_permutation(s, Some(n))
    }
}

/// Parses two permutations onto a common domain size.
fn parse_pair(p: &str, q: &str) -> Result<(Permutation, Permutation), Error> {
    let n = max_label(p).max(max_label(q));
    Ok((parse_sized(p, n)?, parse_sized(q, n)?))
}

pub enum PermAction<'a> {
    Compose(&'a str, &'a str),
    Invert(&'a str),
    Parity(&'a str),
    Family { n: usize, family: Family },
}

pub fn cmd_perm(action: &PermAction, mut report: Report) -> Result<Report, Error> {
    match action {
        PermAction::Compose(p, q) => {
            let (a, b) = parse_pair(p, q)?;
            let c = a.compose(&b)?;
            report.permutations.push(perm_entry("p", &a));
            report.permutations.push(perm_entry("q", &b));
            report.permutations.push(perm_entry("p∘q", &c));
        }
        PermAction::Invert(p) => {
            let a = parse_sized(p, max_label(p))?;
            report.permutations.push(perm_entry("p", &a));
            report.permutations.push(perm_entry("p⁻¹", &a.inverse()));
        }
        PermAction::Parity(p) => {
            let a = parse_sized(p, max_label(p))?;
            report.permutations.push(perm_entry("p", &a));
        }
        PermAction::Family { n, family } => {
            let n = *n;
            let (a, b, word, p) = match family {
                Family::Main => {
                    let word = main_family_word(n)?;
                    (swap_layer_a(n), swap_layer_b(n), word, preprocess_perm(n)?)
                }
                Family::Alt => {
                    let (a, b) = alt_family(n)?;
                    let word = a
                        .inverse()
                        .compose(&b.inverse())?
                        .compose(&a)?
                        .compose(&b)?;
                    let p = conjugator_to(&word, &cycle_shift(n))?;
                    (a, b, word, p)
                }
            };
            report.permutations.push(perm_entry("A", &a));
            report.permutations.push(perm_entry("B", &b));
            report.permutations.push(perm_entry("D", &word));
            report.permutations.push(perm_entry("P", &p));
            report.permutations.push(perm_entry("C (target cycle)", &cycle_shift(n)));
        }
    }
    Ok(report)
}
