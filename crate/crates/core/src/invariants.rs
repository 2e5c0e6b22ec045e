//! Three independent evaluators of Bargmann invariants
//! `Tr(rho_1 ... rho_n)`: a sequential product-trace (scales to any
//! order), the pure-state inner-product chain, and the cycle-operator
//! expectation on the tensor-power space. They serve as mutual oracles
//! for every protocol test in the repo.

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, DensityMatrix, PureState};
use crate::perm::{cycle_shift, index_permutation};
use crate::{Error, TOL_DERIVED, TOL_DIRECT};

/// A quantum state that is known to be pure or given as a density
/// operator.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Pure(psi) => psi.dim(),
            State::Mixed(rho) => rho.dim(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, State::Pure(_))
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            State::Pure(psi) => DensityMatrix::from_pure(psi),
            State::Mixed(rho) => rho.clone(),
        }
    }
}

/// Ordered tuple of states on a common local space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTuple {
    local_dim: usize,
    states: Vec<State>,
}

impl StateTuple {
    pub fn new(states: Vec<State>) -> Result<Self, Error> {
        let first = states
            .first()
            .ok_or_else(|| Error::invalid_input("state tuple must be nonempty"))?;
        let local_dim = first.dim();
        if let Some(pos) = states.iter().position(|s| s.dim() != local_dim) {
            return Err(Error::dim_mismatch(format!(
                "state {} has dimension {}, expected {}",
                pos + 1,
                states[pos].dim(),
                local_dim
            )));
        }
        Ok(StateTuple { local_dim, states })
    }

    pub fn from_pure(states: Vec<PureState>) -> Result<Self, Error> {
        StateTuple::new(states.into_iter().map(State::Pure).collect())
    }

    pub fn n(&self) -> usize {
        self.states.len()
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn all_pure(&self) -> bool {
        self.states.iter().all(State::is_pure)
    }

    pub fn pure_states(&self) -> Option<Vec<&PureState>> {
        self.states
            .iter()
            .map(|s| match s {
                State::Pure(psi) => Some(psi),
                State::Mixed(_) => None,
            })
            .collect()
    }

    /// Tuple rotated so that it starts at position `k` (0-based).
    pub fn rotated(&self, k: usize) -> StateTuple {
        let mut states = self.states.clone();
        let len = states.len();
        states.rotate_left(k % len);
        StateTuple { local_dim: self.local_dim, states }
    }

    /// Tuple in reversed order.
    pub fn reversed(&self) -> StateTuple {
        let mut states = self.states.clone();
        states.reverse();
        StateTuple { local_dim: self.local_dim, states }
    }
}

/// Which evaluation route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ProductTrace,
    PureChain,
    CycleExpectation,
    SwitchProtocol,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ProductTrace => "product-trace",
            Method::PureChain => "pure-chain",
            Method::CycleExpectation => "cycle-expectation",
            Method::SwitchProtocol => "switch-protocol",
        }
    }
}

/// A Bargmann invariant value with its order and provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantValue {
    pub value: Complex64,
    pub order: usize,
    pub method: Method,
}

impl InvariantValue {
    pub(crate) fn checked(value: Complex64, order: usize, method: Method) -> Result<Self, Error> {
        let modulus = value.norm();
        if modulus > 1.0 + 1e-6 {
            return Err(Error::invalid_state(format!(
                "invariant modulus {modulus} exceeds 1 by more than 1e-6; \
                 input states are likely malformed"
            )));
        }
        if modulus > 1.0 + TOL_DERIVED {
            log::warn!("invariant modulus {modulus} slightly exceeds 1 (method {})", method.name());
        }
        Ok(InvariantValue { value, order, method })
    }
}

/// `Tr(rho_1 rho_2 ... rho_n)` by sequential d x d matrix products.
/// Never forms the tensor-power space.
pub fn bargmann_product_trace(t: &StateTuple) -> Result<InvariantValue, Error> {
    let mut acc: Option<ComplexMatrix> = None;
    for state in t.states() {
        let rho = state.to_density();
        acc = Some(match acc {
            None => rho.matrix().clone(),
            Some(m) => m.matmul(rho.matrix())?,
        });
    }
    let value = acc.expect("nonempty tuple").trace()?;
    InvariantValue::checked(value, t.n(), Method::ProductTrace)
}

/// The pure-state chain `<psi_1|psi_2><psi_2|psi_3> ... <psi_n|psi_1>`.
pub fn bargmann_pure_chain(t: &StateTuple) -> Result<InvariantValue, Error> {
    let states = t.pure_states().ok_or_else(|| {
        Error::invalid_input("pure-chain evaluation requires all states pure; use product-trace")
    })?;
    let n = states.len();
    let mut value = Complex64::new(1.0, 0.0);
    for i in 0..n {
        value *= states[i].inner(states[(i + 1) % n])?;
    }
    InvariantValue::checked(value, n, Method::PureChain)
}

/// Tensor product of the tuple's density operators, leftmost state most
/// significant. Dimension-capped.
pub fn tuple_tensor_density(t: &StateTuple) -> Result<ComplexMatrix, Error> {
    let mut acc: Option<ComplexMatrix> = None;
    for state in t.states() {
        let rho = state.to_density();
        acc = Some(match acc {
            None => rho.matrix().clone(),
            Some(m) => {
                let required = m.rows() * rho.dim();
                if required > crate::SIZE_CAP {
                    return Err(Error::SizeCap { required, cap: crate::SIZE_CAP });
                }
                m.tensor(rho.matrix())
            }
        });
    }
    Ok(acc.expect("nonempty tuple"))
}

/// `Tr(C_n (rho_1 x ... x rho_n))` via the cycle-shift representation
/// on the n-fold tensor power.
pub fn bargmann_cycle_expectation(t: &StateTuple) -> Result<InvariantValue, Error> {
    let joint = tuple_tensor_density(t)?;
    let sigma = index_permutation(&cycle_shift(t.n()), t.local_dim())?;
    // Tr(U rho) for a permutation unitary U e_j = e_{sigma(j)}.
    let value = sigma
        .iter()
        .enumerate()
        .map(|(j, &sj)| joint[(j, sj)])
        .sum();
    InvariantValue::checked(value, t.n(), Method::CycleExpectation)
}

/// True iff repeating the first pure state leaves the invariant
/// unchanged: `Delta_{n+1}(psi_1, psi_1, psi_2, ..., psi_n) = Delta_n`.
pub fn repetition_reduction_check(t: &StateTuple) -> Result<bool, Error> {
    let states = t.pure_states().ok_or_else(|| {
        Error::invalid_input("repetition reduction is a pure-state identity")
    })?;
    let mut repeated: Vec<PureState> = Vec::with_capacity(states.len() + 1);
    repeated.push(states[0].clone());
    repeated.extend(states.iter().map(|&s| s.clone()));
    let lhs = bargmann_pure_chain(&StateTuple::from_pure(repeated)?)?;
    let rhs = bargmann_pure_chain(t)?;
    Ok((lhs.value - rhs.value).norm() <= TOL_DIRECT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{
        haar_random_density, haar_random_state, haar_random_unitary, C64, ONE, ZERO,
    };

    pub(crate) fn ket0() -> PureState {
        PureState::basis(2, 0)
    }

    pub(crate) fn ket_plus() -> PureState {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![C64::new(r, 0.0), C64::new(r, 0.0)]).unwrap()
    }

    pub(crate) fn ket_plus_i() -> PureState {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![C64::new(r, 0.0), C64::new(0.0, r)]).unwrap()
    }

    /// The worked triple (|0>, |+>, |+i>) with invariant 0.25 + 0.25i.
    pub(crate) fn worked_triple() -> StateTuple {
        StateTuple::from_pure(vec![ket0(), ket_plus(), ket_plus_i()]).unwrap()
    }

    fn random_pure_tuple(seed: u64, n: usize, d: usize) -> StateTuple {
        StateTuple::from_pure(
            (0..n)
                .map(|i| haar_random_state(seed * 1000 + i as u64, d).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn random_mixed_tuple(seed: u64, n: usize, d: usize) -> StateTuple {
        StateTuple::new(
            (0..n)
                .map(|i| {
                    State::Mixed(haar_random_density(seed * 1000 + i as u64, d, d.min(2)).unwrap())
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn product_trace_pure_pair_is_one() {
        let psi = haar_random_state(1, 3).unwrap();
        let t = StateTuple::from_pure(vec![psi.clone(), psi]).unwrap();
        let v = bargmann_product_trace(&t).unwrap();
        assert!((v.value - ONE).norm() < 1e-12);
    }

    #[test]
    fn orthogonal_adjacent_pair_kills_invariant() {
        let t = StateTuple::from_pure(vec![
            PureState::basis(2, 0),
            PureState::basis(2, 1),
            haar_random_state(7, 2).unwrap(),
        ])
        .unwrap();
        assert!(bargmann_product_trace(&t).unwrap().value.norm() < 1e-12);
    }

    #[test]
    fn worked_triple_value() {
        // <0|+><+|+i><+i|0> = (1/sqrt2)((1+i)/2)(1/sqrt2) = 0.25+0.25i.
        let expect = C64::new(0.25, 0.25);
        let t = worked_triple();
        for v in [
            bargmann_product_trace(&t).unwrap(),
            bargmann_pure_chain(&t).unwrap(),
            bargmann_cycle_expectation(&t).unwrap(),
        ] {
            assert!((v.value - expect).norm() < 1e-12, "{:?}", v);
        }
    }

    #[test]
    fn pure_chain_all_equal_states() {
        let psi = haar_random_state(5, 4).unwrap();
        let t = StateTuple::from_pure(vec![psi.clone(), psi.clone(), psi]).unwrap();
        assert!((bargmann_pure_chain(&t).unwrap().value - ONE).norm() < 1e-12);
    }

    #[test]
    fn pure_chain_rejects_mixed() {
        let t = StateTuple::new(vec![
            State::Pure(ket0()),
            State::Mixed(DensityMatrix::maximally_mixed(2)),
        ])
        .unwrap();
        assert!(bargmann_pure_chain(&t).is_err());
    }

    #[test]
    fn chain_agrees_with_product_trace() {
        let mut checked = 0;
        for seed in 0..25u64 {
            let n = 2 + (seed as usize % 7);
            let d = 2 + (seed as usize % 3);
            let t = random_pure_tuple(seed, n, d);
            let chain = bargmann_pure_chain(&t).unwrap().value;
            let trace = bargmann_product_trace(&t).unwrap().value;
            assert!((chain - trace).norm() < 1e-12);
            checked += 1;
        }
        assert!(checked > 0);
    }

    #[test]
    fn cycle_expectation_agrees_with_product_trace() {
        let single = StateTuple::new(vec![State::Mixed(haar_random_density(3, 3, 2).unwrap())]).unwrap();
        assert!((bargmann_cycle_expectation(&single).unwrap().value - ONE).norm() < 1e-12);

        for seed in 0..20u64 {
            let n = 2 + (seed as usize % 5);
            let t = random_mixed_tuple(seed, n, 2);
            let cyc = bargmann_cycle_expectation(&t).unwrap().value;
            let trace = bargmann_product_trace(&t).unwrap().value;
            assert!((cyc - trace).norm() < TOL_DERIVED);
        }
    }

    #[test]
    fn cycle_expectation_respects_size_cap() {
        let t = random_pure_tuple(1, 13, 2);
        assert!(matches!(bargmann_cycle_expectation(&t), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn repetition_reduction_pure() {
        let single = StateTuple::from_pure(vec![haar_random_state(9, 2).unwrap()]).unwrap();
        assert!(repetition_reduction_check(&single).unwrap());

        let t = random_pure_tuple(11, 4, 3);
        assert!(repetition_reduction_check(&t).unwrap());
    }

    #[test]
    fn repetition_fails_for_mixed_first_state() {
        // Delta_3(rho, rho, sigma) != Delta_2(rho, sigma) for rank-2 rho:
        // the reason the convex-decomposition post-processing exists.
        let rho = haar_random_density(21, 2, 2).unwrap();
        let sigma = haar_random_density(22, 2, 2).unwrap();
        let lhs = bargmann_product_trace(
            &StateTuple::new(vec![
                State::Mixed(rho.clone()),
                State::Mixed(rho.clone()),
                State::Mixed(sigma.clone()),
            ])
            .unwrap(),
        )
        .unwrap()
        .value;
        let rhs = bargmann_product_trace(
            &StateTuple::new(vec![State::Mixed(rho), State::Mixed(sigma)]).unwrap(),
        )
        .unwrap()
        .value;
        assert!((lhs - rhs).norm() > 1e-3);
    }

    #[test]
    fn cyclic_invariance_and_reversal_conjugation() {
        for seed in 0..10u64 {
            let t = random_mixed_tuple(seed + 50, 4, 3);
            let base = bargmann_product_trace(&t).unwrap().value;
            let rot = bargmann_product_trace(&t.rotated(1)).unwrap().value;
            assert!((base - rot).norm() < 1e-12);
            let rev = bargmann_product_trace(&t.reversed()).unwrap().value;
            assert!((rev - base.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn unitary_invariance() {
        for seed in 0..10u64 {
            let t = random_pure_tuple(seed + 80, 4, 3);
            let u = haar_random_unitary(seed + 999, 3).unwrap();
            let conjugated = StateTuple::new(
                t.states()
                    .iter()
                    .map(|s| {
                        let rho = s.to_density();
                        State::Mixed(DensityMatrix::new(u.conjugate(rho.matrix()).unwrap()).unwrap())
                    })
                    .collect(),
            )
            .unwrap();
            let a = bargmann_product_trace(&t).unwrap().value;
            let b = bargmann_product_trace(&conjugated).unwrap().value;
            assert!((a - b).norm() < TOL_DERIVED);
        }
    }

    #[test]
    fn order_sensitivity_witness() {
        let t = worked_triple();
        let fwd = bargmann_product_trace(&t).unwrap().value;
        let rev = bargmann_product_trace(&t.reversed()).unwrap().value;
        assert!((fwd - rev).norm() > 0.4);
    }

    #[test]
    fn tuple_validation() {
        assert!(StateTuple::new(vec![]).is_err());
        let mismatch = StateTuple::new(vec![
            State::Pure(PureState::basis(2, 0)),
            State::Pure(PureState::basis(3, 0)),
        ]);
        assert!(matches!(mismatch, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(PureState::new(vec![ZERO, ZERO]).is_err());
    }
}
