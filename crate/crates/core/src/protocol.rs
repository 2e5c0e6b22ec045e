//! The measurement protocols end to end: the odd-order switch protocol,
//! the even-order workarounds (state repetition and convex
//! decomposition), shot-based estimation, the cycle test, the
//! Hadamard-test simulation of the switch with query accounting, and the
//! even-order no-go witness.
//!
//! The odd-order evaluator never materializes the `2 d^n`-dimensional
//! switch matrix: both input operations are permutation unitaries, so
//! their action is an index relabeling and the exact control statistics
//! cost `O(d^n)` for pure tuples and `O(d^(2n))` for mixed ones.

use num_complex::Complex64;
use rand::distributions::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::exec;
use crate::invariants::{tuple_tensor_density, InvariantValue, Method, State, StateTuple};
use crate::linalg::{
    determinant, haar_random_unitary, hermitian_eigen, C64, ComplexMatrix, DensityMatrix,
    PureState, UnitaryMatrix, ONE, ZERO,
};
use crate::perm::{
    all_permutations, alt_family, conjugator_to, cycle_shift, index_permutation, perm_to_unitary,
    preprocess_perm, swap_layer_a, swap_layer_b, Parity, Permutation,
};
use crate::switch::ControlStats;
use crate::Error;

/// Which pair of switch input operations to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// SWAP layers `A_n = (1 2)(3 4)...`, `B_n = (2 3)(4 5)...` with the
    /// explicit preprocessing permutation `P_n`.
    Main,
    /// The alternative half-cycle/reflection pair. Its switch word
    /// `A^-1 B^-1 A B` is an n-cycle conjugate to `C_n`; the exact
    /// conjugator is computed at build time (it is the identity only at
    /// n = 3).
    Alt,
}

/// How to reduce an even-order invariant to an odd-order run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvenStrategy {
    /// Duplicate the (pure) state at this 1-based position.
    RepeatPure { index: usize },
    /// Eigendecompose the state at this 1-based position and average the
    /// repeated-state runs over the components.
    ConvexDecompose { index: usize },
}

/// Full recipe for one protocol run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolSpec {
    pub n: usize,
    pub local_dim: usize,
    pub family: Family,
    pub even_strategy: Option<EvenStrategy>,
    /// 0 means exact evaluation, no sampling.
    pub shots: u64,
    pub seed: u64,
}

impl ProtocolSpec {
    /// Exact odd-order recipe with no sampling.
    pub fn exact(n: usize, local_dim: usize, family: Family) -> Result<Self, Error> {
        ProtocolSpec {
            n,
            local_dim,
            family,
            even_strategy: None,
            shots: 0,
            seed: 0,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self, Error> {
        if self.n < 2 {
            return Err(Error::invalid_input("protocol order must be at least 2"));
        }
        if self.local_dim < 2 {
            return Err(Error::invalid_input("local dimension must be at least 2"));
        }
        if (self.n % 2 == 0) != self.even_strategy.is_some() {
            return Err(Error::invalid_input(
                "an even-order strategy must be given exactly when the order is even",
            ));
        }
        let effective = if self.n % 2 == 0 { self.n + 1 } else { self.n };
        if self.family == Family::Alt && effective % 2 == 0 {
            return Err(Error::invalid_input("the alt family needs an odd effective order"));
        }
        if let Some(EvenStrategy::RepeatPure { index } | EvenStrategy::ConvexDecompose { index }) =
            self.even_strategy
        {
            if index == 0 || index > self.n {
                return Err(Error::invalid_input("strategy index must be in 1..=n"));
            }
        }
        Ok(self)
    }

    fn check_tuple(&self, t: &StateTuple) -> Result<(), Error> {
        if t.n() != self.n || t.local_dim() != self.local_dim {
            return Err(Error::dim_mismatch(format!(
                "tuple is ({}, {}) but the protocol expects ({}, {})",
                t.n(),
                t.local_dim(),
                self.n,
                self.local_dim
            )));
        }
        Ok(())
    }
}

/// Measurement record of one sampled (or exact) protocol run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationResult {
    pub p_minus: f64,
    pub p_minus_i: f64,
    pub re_estimate: f64,
    pub im_estimate: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub shots_x: u64,
    pub shots_y: u64,
    pub exact: bool,
}

/// Query accounting for one of the two switch inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryCount {
    pub forward: u32,
    pub inverse: u32,
    /// Forward-equivalent count with each inverse expanded to 4 forward
    /// calls under the generic unitary-inversion accounting.
    pub expanded: u32,
}

/// Outcome of the Hadamard-test switch simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationReport {
    /// Sup-norm distance between the simulated and the true switch
    /// output amplitudes.
    pub max_deviation: f64,
    pub queries_a: QueryCount,
    pub queries_b: QueryCount,
}

/// Convex decomposition of a density matrix into pure components.
#[derive(Debug, Clone)]
pub struct ConvexDecomposition {
    weights: Vec<f64>,
    components: Vec<PureState>,
}

impl ConvexDecomposition {
    pub fn new(weights: Vec<f64>, components: Vec<PureState>) -> Result<Self, Error> {
        if weights.len() != components.len() || weights.is_empty() {
            return Err(Error::invalid_input("need one weight per component"));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::invalid_input("convex weights must be positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid_input(format!(
                "convex weights sum to {total}, expected 1"
            )));
        }
        let dim = components[0].dim();
        if components.iter().any(|c| c.dim() != dim) {
            return Err(Error::dim_mismatch("components on different spaces"));
        }
        Ok(ConvexDecomposition { weights, components })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[PureState] {
        &self.components
    }

    /// `sum_j alpha_j |psi_j><psi_j|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.components[0].dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (w, c) in self.weights.iter().zip(&self.components) {
            let proj = c.projector();
            for i in 0..dim {
                for j in 0..dim {
                    m[(i, j)] += *w * proj[(i, j)];
                }
            }
        }
        m
    }
}

/// The permutations behind one odd-order protocol instance.
#[derive(Debug, Clone)]
pub(crate) struct FamilyWords {
    pub a: Permutation,
    pub b: Permutation,
    /// Preprocessing permutation: `p^-1 . d_word . p = C_n`.
    pub p: Permutation,
    /// The word the switch statistics read out: `A^-1 B^-1 A B`, i.e.
    /// the permutation represented by `D(A, B) = A^dag B^dag A B`.
    pub d_word: Permutation,
}

pub(crate) fn family_words(n: usize, family: Family) -> Result<FamilyWords, Error> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::invalid_input(
            "the switch protocol runs at odd order >= 3; even orders go through a strategy",
        ));
    }
    let (a, b) = match family {
        Family::Main => (swap_layer_a(n), swap_layer_b(n)),
        Family::Alt => alt_family(n)?,
    };
    let d_word = Permutation::product(&[&a.inverse(), &b.inverse(), &a, &b])?;
    let p = match family {
        Family::Main => preprocess_perm(n)?,
        Family::Alt => conjugator_to(&d_word, &cycle_shift(n))?,
    };
    debug_assert_eq!(
        Permutation::product(&[&p.inverse(), &d_word, &p]).unwrap(),
        cycle_shift(n)
    );
    Ok(FamilyWords { a, b, p, d_word })
}

/// The protocol's building blocks as dense unitaries: the two switch
/// inputs `A`, `B` and the preprocessing unitary `P` on the
/// `d^n`-dimensional space.
pub fn build_odd_protocol(
    n: usize,
    local_dim: usize,
    family: Family,
) -> Result<(UnitaryMatrix, UnitaryMatrix, UnitaryMatrix), Error> {
    let words = family_words(n, family)?;
    Ok((
        perm_to_unitary(&words.a, local_dim)?,
        perm_to_unitary(&words.b, local_dim)?,
        perm_to_unitary(&words.p, local_dim)?,
    ))
}

fn tensor_amplitudes(states: &[&PureState]) -> Vec<C64> {
    let mut acc = vec![ONE];
    for s in states {
        let mut next = Vec::with_capacity(acc.len() * s.dim());
        for &x in &acc {
            for &y in s.amplitudes() {
                next.push(x * y);
            }
        }
        acc = next;
    }
    acc
}

fn inverse_index(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; sigma.len()];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    inv
}

/// Exact control statistics of the odd-order switch run on `t`:
/// preprocess to `psi_sw` (or `rho_sw`), feed `A`, `B` to the switch
/// with control `|+>`, measure X and Y.
fn exact_odd_stats(t: &StateTuple, family: Family) -> Result<ControlStats, Error> {
    let n = t.n();
    let d = t.local_dim();
    let words = family_words(n, family)?;
    let sigma_p = index_permutation(&words.p, d)?;
    let size = sigma_p.len();

    if let Some(pure) = t.pure_states() {
        // Statevector path: |0> branch carries BA psi_sw, |1> carries
        // AB psi_sw; both are index relabelings.
        let psi = tensor_amplitudes(&pure);
        let mut psi_sw = vec![ZERO; size];
        for (i, &z) in psi.iter().enumerate() {
            psi_sw[sigma_p[i]] = z;
        }
        let inv_ba = inverse_index(&index_permutation(&words.b.compose(&words.a)?, d)?);
        let inv_ab = inverse_index(&index_permutation(&words.a.compose(&words.b)?, d)?);
        let mut p_minus = 0.0;
        let mut p_minus_i = 0.0;
        for j in 0..size {
            let b0 = psi_sw[inv_ba[j]];
            let b1 = psi_sw[inv_ab[j]];
            p_minus += (b0 - b1).norm_sqr() / 4.0;
            p_minus_i += (b0 + Complex64::i() * b1).norm_sqr() / 4.0;
        }
        ControlStats::new(p_minus, p_minus_i)
    } else {
        // Density path: Tr(rho_sw D) with D a permutation unitary, so
        // the trace picks one entry per row.
        let joint = tuple_tensor_density(t)?;
        let sigma_d = index_permutation(&words.d_word, d)?;
        let inv_p = inverse_index(&sigma_p);
        let z: Complex64 = (0..size).map(|j| joint[(inv_p[j], inv_p[sigma_d[j]])]).sum();
        ControlStats::new(0.5 * (1.0 - z.re), 0.5 * (1.0 - z.im))
    }
}

fn stats_to_value(stats: &ControlStats, order: usize) -> Result<InvariantValue, Error> {
    InvariantValue::checked(
        Complex64::new(stats.re_trace(), stats.im_trace()),
        order,
        Method::SwitchProtocol,
    )
}

/// The invariant read off the exact switch statistics:
/// `(1 - 2 p_-) + i (1 - 2 p_-i)`.
pub fn odd_invariant_via_switch(
    t: &StateTuple,
    spec: &ProtocolSpec,
) -> Result<InvariantValue, Error> {
    spec.check_tuple(t)?;
    if spec.shots != 0 {
        return Err(Error::invalid_input(
            "exact evaluation needs shots = 0; use sample_protocol for estimates",
        ));
    }
    let stats = exact_odd_stats(t, spec.family)?;
    stats_to_value(&stats, t.n())
}

fn repeat_at(t: &StateTuple, index: usize) -> Result<StateTuple, Error> {
    if index == 0 || index > t.n() {
        return Err(Error::invalid_input("repeat index must be in 1..=n"));
    }
    if !t.states()[index - 1].is_pure() {
        return Err(Error::invalid_input(
            "the repeated state must be pure; mixed states go through convex decomposition",
        ));
    }
    let mut states = t.states().to_vec();
    let duplicate = states[index - 1].clone();
    states.insert(index - 1, duplicate);
    StateTuple::new(states)
}

/// Even-order invariant via state repetition: duplicates the pure state
/// at `repeat_index` and runs the order `n+1` protocol. The duplicate
/// contributes a factor `<psi|psi> = 1` to the chain, so the result is
/// the order-n invariant of the original tuple.
pub fn even_invariant_repeat_pure(
    t: &StateTuple,
    repeat_index: usize,
    family: Family,
) -> Result<InvariantValue, Error> {
    if t.n() % 2 != 0 {
        return Err(Error::invalid_input("repetition is the even-order workaround"));
    }
    let stats = exact_odd_stats(&repeat_at(t, repeat_index)?, family)?;
    stats_to_value(&stats, t.n())
}

/// Even-order invariant for a mixed state at `index`: averages the
/// repeated-state protocol over the pure components of `decomp`,
/// `sum_j alpha_j Delta_{n+1}(..., psi_j, psi_j, ...)`.
pub fn even_invariant_convex(
    t: &StateTuple,
    decomp: &ConvexDecomposition,
    index: usize,
    family: Family,
) -> Result<InvariantValue, Error> {
    if t.n() % 2 != 0 {
        return Err(Error::invalid_input("convex decomposition is the even-order workaround"));
    }
    if index == 0 || index > t.n() {
        return Err(Error::invalid_input("decomposition index must be in 1..=n"));
    }
    let target = t.states()[index - 1].to_density();
    let residual = decomp.reconstruct().max_abs_diff(target.matrix());
    if residual > 1e-10 {
        return Err(Error::invalid_input(format!(
            "decomposition does not reconstruct the state at position {index} \
             (residual {residual:e})"
        )));
    }
    let mut value = Complex64::default();
    for (w, psi) in decomp.weights.iter().zip(&decomp.components) {
        let mut states = t.states().to_vec();
        states[index - 1] = State::Pure(psi.clone());
        let run = even_invariant_repeat_pure(&StateTuple::new(states)?, index, family)?;
        value += Complex64::new(*w, 0.0) * run.value;
    }
    InvariantValue::checked(value, t.n(), Method::SwitchProtocol)
}

/// Spectral convex decomposition of a density matrix. Eigenvalues below
/// 1e-12 are dropped and the remaining weights renormalized.
pub fn eigendecompose_for_protocol(rho: &DensityMatrix) -> Result<ConvexDecomposition, Error> {
    let (values, vectors) = hermitian_eigen(rho.matrix());
    let mut weights = Vec::new();
    let mut components = Vec::new();
    for (lambda, v) in values.iter().zip(vectors) {
        if *lambda >= 1e-12 {
            weights.push(*lambda);
            components.push(PureState::normalized(v)?);
        }
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        log::warn!("renormalizing convex weights by {:e}", total - 1.0);
    }
    for w in &mut weights {
        *w /= total;
    }
    ConvexDecomposition::new(weights, components)
}

const SHOT_CHUNK: u64 = 1024;
const STREAM_Y: u64 = 1 << 32;

/// Number of successes among `shots` Bernoulli(p) draws. Deterministic
/// in `(seed, stream_base)` and independent of worker count: shots are
/// split into fixed chunks, each with its own counter-mode stream.
fn bernoulli_successes(p: f64, shots: u64, seed: u64, stream_base: u64) -> Result<u64, Error> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::invalid_state(format!("cannot sample probability {p}")));
    }
    if !(0.0..=1.0).contains(&p) {
        log::warn!("clamping sampling probability {p:e} to [0, 1]");
    }
    let p = p.clamp(0.0, 1.0);
    let chunks = shots.div_ceil(SHOT_CHUNK);
    let dist = Bernoulli::new(p).expect("clamped probability");
    Ok(exec::sum_over(chunks as usize, |c| {
        let c = c as u64;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream_base + c);
        let count = SHOT_CHUNK.min(shots - c * SHOT_CHUNK);
        (0..count).filter(|_| dist.sample(&mut rng)).count() as u64
    }))
}

/// Exact control statistics for a spec-described run, with even orders
/// routed through the configured strategy.
fn effective_stats(t: &StateTuple, spec: &ProtocolSpec) -> Result<ControlStats, Error> {
    spec.check_tuple(t)?;
    if spec.n % 2 == 1 {
        return exact_odd_stats(t, spec.family);
    }
    match spec.even_strategy {
        None => Err(Error::invalid_input("even order needs a strategy")),
        Some(EvenStrategy::RepeatPure { index }) => {
            exact_odd_stats(&repeat_at(t, index)?, spec.family)
        }
        Some(EvenStrategy::ConvexDecompose { index }) => {
            let decomp = eigendecompose_for_protocol(&t.states()[index - 1].to_density())?;
            let mut p_minus = 0.0;
            let mut p_minus_i = 0.0;
            for (w, psi) in decomp.weights.iter().zip(&decomp.components) {
                let mut states = t.states().to_vec();
                states[index - 1] = State::Pure(psi.clone());
                let run = exact_odd_stats(&repeat_at(&StateTuple::new(states)?, index)?, spec.family)?;
                p_minus += w * run.p_minus;
                p_minus_i += w * run.p_minus_i;
            }
            ControlStats::new(p_minus, p_minus_i)
        }
    }
}

/// Runs the protocol with finite statistics: computes the exact
/// probabilities, splits `shots` into `ceil/2` X-basis and `floor/2`
/// Y-basis draws, and returns frequency estimates. The reported standard
/// errors are for the Re/Im estimates, i.e. twice the binomial standard
/// error of the underlying frequencies. `shots = 0` falls back to the
/// exact result.
pub fn sample_protocol(t: &StateTuple, spec: &ProtocolSpec) -> Result<EstimationResult, Error> {
    let stats = effective_stats(t, spec)?;
    if spec.shots == 0 {
        return Ok(EstimationResult {
            p_minus: stats.p_minus,
            p_minus_i: stats.p_minus_i,
            re_estimate: stats.re_trace(),
            im_estimate: stats.im_trace(),
            stderr_re: 0.0,
            stderr_im: 0.0,
            shots_x: 0,
            shots_y: 0,
            exact: true,
        });
    }
    let shots_x = spec.shots.div_ceil(2);
    let shots_y = spec.shots / 2;
    let hits_x = bernoulli_successes(stats.p_minus, shots_x, spec.seed, 0)?;
    let p_hat_x = hits_x as f64 / shots_x as f64;
    let (p_hat_y, stderr_im) = if shots_y > 0 {
        let hits_y = bernoulli_successes(stats.p_minus_i, shots_y, spec.seed, STREAM_Y)?;
        let p = hits_y as f64 / shots_y as f64;
        (p, 2.0 * (p * (1.0 - p) / shots_y as f64).sqrt())
    } else {
        (stats.p_minus_i, 0.0)
    };
    Ok(EstimationResult {
        p_minus: p_hat_x,
        p_minus_i: p_hat_y,
        re_estimate: 1.0 - 2.0 * p_hat_x,
        im_estimate: 1.0 - 2.0 * p_hat_y,
        stderr_re: 2.0 * (p_hat_x * (1.0 - p_hat_x) / shots_x as f64).sqrt(),
        stderr_im,
        shots_x,
        shots_y,
        exact: false,
    })
}

/// The cycle test: Hadamard on the auxiliary qubit, controlled cyclic
/// shift `C_n` on the tuple register, phase `diag(1, i^s)` on the
/// auxiliary, Hadamard, measure. Returns the probability of outcome 1:
/// `(1 - Re Delta_n)/2` for `s = 0` and `(1 + Im Delta_n)/2` for
/// `s = 1` (the sign of the `s = 1` branch follows from the
/// `P^s`-before-final-Hadamard gate order used here).
pub fn cycle_test(t: &StateTuple, s: u8) -> Result<f64, Error> {
    if s > 1 {
        return Err(Error::invalid_input("the phase exponent s must be 0 or 1"));
    }
    let phase = if s == 0 { ONE } else { Complex64::i() };
    let sigma_c = index_permutation(&cycle_shift(t.n()), t.local_dim())?;
    let p1 = if let Some(pure) = t.pure_states() {
        let psi = tensor_amplitudes(&pure);
        let inv_c = inverse_index(&sigma_c);
        // Outcome-1 amplitudes after the second Hadamard:
        // (psi - i^s C psi)/2.
        (0..psi.len())
            .map(|j| (psi[j] - phase * psi[inv_c[j]]).norm_sqr() / 4.0)
            .sum()
    } else {
        let joint = tuple_tensor_density(t)?;
        let z: Complex64 = (0..sigma_c.len()).map(|j| joint[(j, sigma_c[j])]).sum();
        0.5 * (1.0 - (phase * z).re)
    };
    if !(-1e-12..=1.0 + 1e-12).contains(&p1) {
        return Err(Error::invalid_state(format!("cycle test probability {p1} out of range")));
    }
    Ok(p1.clamp(0.0, 1.0))
}

/// Simulates the switch on `|+> (x) |psi>` through a fixed-order
/// Hadamard-test circuit: prepare `|phi> = BA|psi>`, run a controlled
/// `U = A B A^dag B^dag`, and apply the final Hadamard. Output is
/// `(|0>(BA + AB)|psi> + |1>(BA - AB)|psi>)/2`, compared entrywise
/// against the direct switch output.
pub fn simulate_switch_hadamard(
    a: &UnitaryMatrix,
    b: &UnitaryMatrix,
    psi: &PureState,
) -> Result<(PureState, SimulationReport), Error> {
    if a.dim() != b.dim() || a.dim() != psi.dim() {
        return Err(Error::dim_mismatch("operation/state dimension mismatch"));
    }
    let d = psi.dim();
    // Queries: |phi> costs one forward call each; U costs one forward
    // and one inverse call each.
    let phi = b.matrix().apply(&a.matrix().apply(psi.amplitudes())?)?;
    let u = a
        .matmul(b)?
        .matmul(&a.dagger())?
        .matmul(&b.dagger())?;
    let u_phi = u.matrix().apply(&phi)?;
    let mut amplitudes = Vec::with_capacity(2 * d);
    amplitudes.extend((0..d).map(|k| 0.5 * (phi[k] + u_phi[k])));
    amplitudes.extend((0..d).map(|k| 0.5 * (phi[k] - u_phi[k])));
    let simulated = PureState::new(amplitudes)?;

    // Direct switch output with |+> control, after the same final
    // Hadamard: (|0>(b0 + b1) + |1>(b0 - b1))/2.
    let b0 = phi; // BA psi again
    let b1 = a.matrix().apply(&b.matrix().apply(psi.amplitudes())?)?;
    let mut max_deviation = 0.0f64;
    for k in 0..d {
        let top = 0.5 * (b0[k] + b1[k]);
        let bot = 0.5 * (b0[k] - b1[k]);
        max_deviation = max_deviation
            .max((simulated.amplitudes()[k] - top).norm())
            .max((simulated.amplitudes()[d + k] - bot).norm());
    }
    let per_op = QueryCount { forward: 2, inverse: 1, expanded: 6 };
    Ok((
        simulated,
        SimulationReport { max_deviation, queries_a: per_op, queries_b: per_op },
    ))
}

/// Numeric witness of the even-order no-go: why no protocol of the
/// odd-order shape can produce `C_n` for even `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NogoReport {
    pub n: usize,
    pub local_dim: usize,
    /// `C_n` is an odd permutation (always true for even n).
    pub cycle_parity_odd: bool,
    /// Number of `(P, U1, U2)` triples searched exhaustively at the
    /// permutation level; `None` when n is too large to enumerate.
    pub exhaustive_triples: Option<usize>,
    /// Solutions of `C_n = P^-1 U1^-1 U2^-1 U1 U2 P` found (always 0).
    pub exhaustive_solutions: Option<usize>,
    pub trials: usize,
    /// Largest `|det(RHS) - 1|` over the random-unitary trials.
    pub max_det_deviation: f64,
    /// Exact determinant sign of the `C_n` representation at this
    /// local dimension.
    pub cycle_det_sign: i32,
    /// True when the representation determinant is +1 despite the odd
    /// parity, so the determinant comparison alone has no force at this
    /// `(n, d)`. A transposition on the n-fold tensor power has
    /// determinant `(-1)^{d(d-1)/2 * d^(n-2)}`, which is +1 whenever
    /// `d = 0, 1 (mod 4)`, and also for every even `d` once `n >= 3`
    /// (the `d^(n-2)` padding factor is then even). The group-level
    /// parity argument is unaffected.
    pub determinant_obstruction_vanishes: bool,
}

/// Permutation-level word `P^-1 U1^-1 U2^-1 U1 U2 P`.
fn nogo_word(p: &Permutation, u1: &Permutation, u2: &Permutation) -> Permutation {
    Permutation::product(&[&p.inverse(), &u1.inverse(), &u2.inverse(), u1, u2, p])
        .expect("same symmetric group")
}

const NOGO_EXHAUSTIVE_MAX: usize = 5;

/// Builds the Theorem-3 witness: parity of `C_n`, exhaustive
/// permutation-triple search (small n), random-unitary determinant
/// trials, and the exact representation determinant.
pub fn nogo_witness(
    n: usize,
    local_dim: usize,
    trials: usize,
    seed: u64,
) -> Result<NogoReport, Error> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::invalid_input("the no-go witness applies to even orders"));
    }
    let target = cycle_shift(n);
    let cycle_parity_odd = target.parity() == Parity::Odd;

    let (exhaustive_triples, exhaustive_solutions) = if n <= NOGO_EXHAUSTIVE_MAX {
        let perms = all_permutations(n);
        let count = perms.len();
        let solutions = exec::sum_over(count, |pi| {
            let mut found = 0usize;
            for u1 in &perms {
                for u2 in &perms {
                    if nogo_word(&perms[pi], u1, u2) == target {
                        found += 1;
                    }
                }
            }
            found
        });
        (Some(count * count * count), Some(solutions))
    } else {
        (None, None)
    };

    let size = index_permutation(&target, local_dim)?.len();
    let mut max_det_deviation = 0.0f64;
    for trial in 0..trials {
        let base = seed.wrapping_add(1000 * trial as u64);
        let p = haar_random_unitary(base, size)?;
        let u1 = haar_random_unitary(base + 1, size)?;
        let u2 = haar_random_unitary(base + 2, size)?;
        let rhs = p
            .dagger()
            .matmul(&u1.dagger())?
            .matmul(&u2.dagger())?
            .matmul(&u1)?
            .matmul(&u2)?
            .matmul(&p)?;
        let det = determinant(rhs.matrix())?;
        max_det_deviation = max_det_deviation.max((det - ONE).norm());
    }

    let cycle_det_sign = crate::perm::unitary_determinant_sign(&target, local_dim)?;
    Ok(NogoReport {
        n,
        local_dim,
        cycle_parity_odd,
        exhaustive_triples,
        exhaustive_solutions,
        trials,
        max_det_deviation,
        cycle_det_sign,
        determinant_obstruction_vanishes: cycle_parity_odd && cycle_det_sign == 1,
    })
}
