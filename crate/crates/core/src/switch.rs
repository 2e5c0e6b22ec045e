//! The unitary quantum switch as a concrete channel. Builds
//! `S = |0><0| x BA + |1><1| x AB`, applies it to control (x) system
//! inputs, and extracts control-qubit statistics two ways: by direct
//! Born-rule projection and by the closed forms
//! `p_- = (1 - Re Tr(rho D))/2`, `p_-i = (1 - Im Tr(rho D))/2` with
//! `D = A^dag B^dag A B`. The two routes are certified against each
//! other in the tests; everything downstream may use either.
//!
//! Measurement bases are pinned as X = {|+>, |->} and
//! Y = {|+i>, |-i>} with `|+-i> = (|0> +- i|1>)/sqrt(2)`; the sign of
//! the imaginary readout depends on this phase choice.

use num_complex::Complex64;

use crate::invariants::State;
use crate::linalg::{C64, ComplexMatrix, DensityMatrix, PureState, UnitaryMatrix};
use crate::Error;

/// Operations and input state of one switch run.
#[derive(Debug, Clone)]
pub struct SwitchInput {
    a: UnitaryMatrix,
    b: UnitaryMatrix,
    control: State,
    system: State,
}

impl SwitchInput {
    pub fn new(
        a: UnitaryMatrix,
        b: UnitaryMatrix,
        control: State,
        system: State,
    ) -> Result<Self, Error> {
        if a.dim() != b.dim() || a.dim() != system.dim() {
            return Err(Error::dim_mismatch(format!(
                "switch operations act on dim {} / {} but the system has dim {}",
                a.dim(),
                b.dim(),
                system.dim()
            )));
        }
        if control.dim() != 2 {
            return Err(Error::invalid_input("the switch control is a qubit"));
        }
        Ok(SwitchInput { a, b, control, system })
    }

    /// Convenience constructor with the control fixed to `|+>`.
    pub fn with_plus_control(
        a: UnitaryMatrix,
        b: UnitaryMatrix,
        system: State,
    ) -> Result<Self, Error> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::new(vec![C64::new(r, 0.0), C64::new(r, 0.0)])?;
        SwitchInput::new(a, b, State::Pure(plus), system)
    }

    pub fn a(&self) -> &UnitaryMatrix {
        &self.a
    }

    pub fn b(&self) -> &UnitaryMatrix {
        &self.b
    }
}

/// Joint control (x) system state after the switch, control most
/// significant.
#[derive(Debug, Clone)]
pub struct SwitchOutput {
    joint: State,
}

impl SwitchOutput {
    pub fn joint(&self) -> &State {
        &self.joint
    }

    pub fn system_dim(&self) -> usize {
        self.joint.dim() / 2
    }
}

/// Probabilities of the `|->` and `|-i>` control outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlStats {
    pub p_minus: f64,
    pub p_minus_i: f64,
}

impl ControlStats {
    /// Validates that raw probabilities are in `[-1e-12, 1 + 1e-12]`
    /// and clamps them to `[0, 1]`.
    pub fn new(p_minus: f64, p_minus_i: f64) -> Result<Self, Error> {
        for (label, p) in [("p_minus", p_minus), ("p_minus_i", p_minus_i)] {
            if !p.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(Error::invalid_state(format!(
                    "{label} = {p} is not a probability within tolerance"
                )));
            }
            if !(0.0..=1.0).contains(&p) {
                log::warn!("clamping {label} = {p:e} to [0, 1]");
            }
        }
        Ok(ControlStats {
            p_minus: p_minus.clamp(0.0, 1.0),
            p_minus_i: p_minus_i.clamp(0.0, 1.0),
        })
    }

    /// `Re Tr(rho D) = 1 - 2 p_-`.
    pub fn re_trace(&self) -> f64 {
        1.0 - 2.0 * self.p_minus
    }

    /// `Im Tr(rho D) = 1 - 2 p_-i`.
    pub fn im_trace(&self) -> f64 {
        1.0 - 2.0 * self.p_minus_i
    }
}

/// The switch unitary `|0><0| x BA + |1><1| x AB` on the
/// 2d-dimensional control (x) system space.
pub fn switch_unitary(a: &UnitaryMatrix, b: &UnitaryMatrix) -> Result<UnitaryMatrix, Error> {
    if a.dim() != b.dim() {
        return Err(Error::dim_mismatch("switch operations must share a dimension"));
    }
    let d = a.dim();
    let ba = b.matmul(a)?;
    let ab = a.matmul(b)?;
    let m = ComplexMatrix::from_fn(2 * d, 2 * d, |i, j| {
        match (i / d, j / d) {
            (0, 0) => ba.matrix()[(i % d, j % d)],
            (1, 1) => ab.matrix()[(i % d, j % d)],
            _ => crate::linalg::ZERO,
        }
    });
    // Block-diagonal with unitary blocks; revalidation is redundant.
    Ok(UnitaryMatrix::trusted(m))
}

/// The anticommutator `{A,B} = AB + BA` and commutator `[A,B] = AB - BA`.
/// The switch output on `|+><+| x rho` decomposes over exactly these
/// two operators.
pub fn commutator_form(
    a: &UnitaryMatrix,
    b: &UnitaryMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix), Error> {
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    Ok((ab.matrix().add(ba.matrix())?, ab.matrix().sub(ba.matrix())?))
}

/// `D(A, B) = A^dag B^dag A B`, the operator whose trace against the
/// system state the control statistics read out.
pub fn dab(a: &UnitaryMatrix, b: &UnitaryMatrix) -> Result<UnitaryMatrix, Error> {
    a.dagger().matmul(&b.dagger())?.matmul(a)?.matmul(b)
}

/// Applies the switch to `control (x) system`. When both inputs are
/// pure the output is tracked as a 2d state vector; otherwise the
/// density operator is conjugated by [`switch_unitary`].
pub fn apply_switch(input: &SwitchInput) -> Result<SwitchOutput, Error> {
    let joint = match (&input.control, &input.system) {
        (State::Pure(c), State::Pure(psi)) => {
            let b0 = input.b.matrix().apply(&input.a.matrix().apply(psi.amplitudes())?)?;
            let b1 = input.a.matrix().apply(&input.b.matrix().apply(psi.amplitudes())?)?;
            let c0 = c.amplitudes()[0];
            let c1 = c.amplitudes()[1];
            let mut amplitudes = Vec::with_capacity(2 * psi.dim());
            amplitudes.extend(b0.iter().map(|&z| c0 * z));
            amplitudes.extend(b1.iter().map(|&z| c1 * z));
            State::Pure(PureState::new(amplitudes)?)
        }
        _ => {
            let s = switch_unitary(&input.a, &input.b)?;
            let joint_in = input
                .control
                .to_density()
                .matrix()
                .tensor(input.system.to_density().matrix());
            State::Mixed(DensityMatrix::new(s.conjugate(&joint_in)?)?)
        }
    };
    Ok(SwitchOutput { joint })
}

/// Control statistics of a switch output by direct projection onto
/// `|-><-| x 1` and `|-i><-i| x 1`.
pub fn control_stats_born(output: &SwitchOutput) -> Result<ControlStats, Error> {
    let d = output.system_dim();
    match &output.joint {
        State::Pure(v) => {
            let amp = v.amplitudes();
            let (top, bot) = amp.split_at(d);
            // <-| picks (top - bot)/sqrt(2); <-i| picks (top + i bot)/sqrt(2).
            let mut p_minus = 0.0;
            let mut p_minus_i = 0.0;
            for k in 0..d {
                p_minus += (top[k] - bot[k]).norm_sqr() / 2.0;
                p_minus_i += (top[k] + Complex64::i() * bot[k]).norm_sqr() / 2.0;
            }
            ControlStats::new(p_minus, p_minus_i)
        }
        State::Mixed(rho) => {
            let m = rho.matrix();
            let mut tr00 = Complex64::default();
            let mut tr11 = Complex64::default();
            let mut tr01 = Complex64::default();
            for k in 0..d {
                tr00 += m[(k, k)];
                tr11 += m[(d + k, d + k)];
                tr01 += m[(k, d + k)];
            }
            let diag = 0.5 * (tr00 + tr11).re;
            ControlStats::new(diag - tr01.re, diag + tr01.im)
        }
    }
}

/// Control statistics from the closed forms
/// `p_- = (1 - Re Tr(rho D))/2` and `p_-i = (1 - Im Tr(rho D))/2`,
/// valid for control `|+><+|`.
pub fn control_stats_formula(
    a: &UnitaryMatrix,
    b: &UnitaryMatrix,
    system: &State,
) -> Result<ControlStats, Error> {
    if a.dim() != b.dim() || a.dim() != system.dim() {
        return Err(Error::dim_mismatch("operation/state dimension mismatch"));
    }
    let d = dab(a, b)?;
    let z = match system {
        State::Pure(psi) => {
            let dpsi = d.matrix().apply(psi.amplitudes())?;
            psi.amplitudes()
                .iter()
                .zip(&dpsi)
                .map(|(x, y)| x.conj() * y)
                .sum::<Complex64>()
        }
        State::Mixed(rho) => rho.matrix().matmul(d.matrix())?.trace()?,
    };
    ControlStats::new(0.5 * (1.0 - z.re), 0.5 * (1.0 - z.im))
}
