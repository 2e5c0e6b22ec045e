//! Dense complex linear algebra substrate: matrices, state vectors,
//! density operators, tensor products, traces, and seeded Haar-random
//! generation.
//!
//! Index convention: in all tensor products the *leftmost* factor is the
//! most significant, i.e. for dims `(d1, d2)` the composite index is
//! `i = i1 * d2 + i2`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, TOL_DERIVED, TOL_DIRECT};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build from a row-major closure.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self, Error> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(Error::invalid_input("matrix must have at least one row"));
        }
        let ncols = rows[0].len();
        if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::invalid_input("all matrix rows must have the same nonzero length"));
        }
        Ok(ComplexMatrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Standard matrix product.
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, Error> {
        if self.cols != other.rows {
            return Err(Error::dim_mismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row_b = &other.data[k * other.cols..(k + 1) * other.cols];
                let row_o = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in row_o.iter_mut().zip(row_b) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Kronecker product; `self` is the most significant factor.
    pub fn tensor(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = ComplexMatrix::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self[(i1, j1)];
                if a == ZERO {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out[(i1 * other.rows + i2, j1 * other.cols + j2)] = a * other[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> Result<C64, Error> {
        if !self.is_square() {
            return Err(Error::invalid_input(format!(
                "trace requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim_mismatch("matrix addition shape mismatch"));
        }
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&other.data) {
            *o += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim_mismatch("matrix subtraction shape mismatch"));
        }
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&other.data) {
            *o -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        let mut out = self.clone();
        for z in &mut out.data {
            *z *= s;
        }
        out
    }

    /// Entrywise sup-norm of the difference.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Apply the matrix to a column vector.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>, Error> {
        if v.len() != self.cols {
            return Err(Error::dim_mismatch("matrix-vector shape mismatch"));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect())
    }

    fn unitarity_deviation(&self) -> f64 {
        let gram = self.dagger().matmul(self).expect("square");
        gram.max_abs_diff(&ComplexMatrix::identity(self.cols))
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Square matrix with a validated unitarity contract:
/// `max |U^dag U - I| <= 1e-10`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    m: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self, Error> {
        if !m.is_square() {
            return Err(Error::invalid_input("unitary matrix must be square"));
        }
        if !m.is_finite() {
            return Err(Error::invalid_input("unitary matrix has non-finite entries"));
        }
        let deviation = m.unitarity_deviation();
        if deviation > TOL_DERIVED {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(UnitaryMatrix { m })
    }

    /// For matrices unitary by construction (permutation matrices,
    /// products of validated unitaries).
    pub(crate) fn trusted(m: ComplexMatrix) -> Self {
        debug_assert!(m.unitarity_deviation() <= TOL_DERIVED);
        UnitaryMatrix { m }
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix { m: ComplexMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn dagger(&self) -> UnitaryMatrix {
        UnitaryMatrix { m: self.m.dagger() }
    }

    pub fn matmul(&self, other: &UnitaryMatrix) -> Result<UnitaryMatrix, Error> {
        Ok(UnitaryMatrix { m: self.m.matmul(&other.m)? })
    }

    /// Conjugation `U M U^dag`.
    pub fn conjugate(&self, m: &ComplexMatrix) -> Result<ComplexMatrix, Error> {
        self.m.matmul(m)?.matmul(&self.m.dagger())
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self, Error> {
        if amplitudes.is_empty() {
            return Err(Error::invalid_state("state vector must be nonempty"));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid_state("state vector has non-finite amplitudes"));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > TOL_DIRECT {
            return Err(Error::invalid_state(format!(
                "state vector norm is {norm}, expected 1 within {TOL_DIRECT:e}"
            )));
        }
        Ok(PureState { amplitudes })
    }

    /// Normalize an arbitrary nonzero vector.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self, Error> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::invalid_state("cannot normalize a zero or non-finite vector"));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Ok(PureState { amplitudes })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        PureState { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64, Error> {
        if self.dim() != other.dim() {
            return Err(Error::dim_mismatch("inner product dimension mismatch"));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product; `self` is the most significant factor.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        PureState { amplitudes }
    }

    /// Projector `|psi><psi|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        })
    }
}

/// Validated density operator: Hermitian, unit trace, positive
/// semidefinite within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self, Error> {
        Self::validate(&m)?;
        let min = hermitian_eigenvalues(&m).into_iter().fold(f64::INFINITY, f64::min);
        if min < -TOL_DERIVED {
            return Err(Error::invalid_state(format!(
                "density matrix has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(DensityMatrix { m })
    }

    fn validate(m: &ComplexMatrix) -> Result<(), Error> {
        if !m.is_square() {
            return Err(Error::invalid_state("density matrix must be square"));
        }
        if !m.is_finite() {
            return Err(Error::invalid_state("density matrix has non-finite entries"));
        }
        if m.max_abs_diff(&m.dagger()) > TOL_DIRECT {
            return Err(Error::invalid_state("density matrix is not Hermitian"));
        }
        let tr = m.trace()?;
        if (tr - ONE).norm() > TOL_DIRECT {
            return Err(Error::invalid_state(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        Ok(())
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix { m: psi.projector() }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            m: ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.m.matmul(&self.m).expect("square").trace().expect("square").re
    }
}

/// Eigenvalues of a Hermitian matrix (ascending order not guaranteed).
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Eigendecomposition of a Hermitian matrix. Returns `(values, vectors)`
/// where `vectors[k]` is the eigenvector for `values[k]`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, Vec<Vec<C64>>) {
    assert!(m.is_square());
    let dim = m.rows();
    let nm = nalgebra::DMatrix::from_fn(dim, dim, |i, j| m[(i, j)]);
    let eig = nm.symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let vectors: Vec<Vec<C64>> = (0..dim)
        .map(|k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();
    (values, vectors)
}

/// Determinant of a square complex matrix (LU factorization).
pub fn determinant(m: &ComplexMatrix) -> Result<C64, Error> {
    if !m.is_square() {
        return Err(Error::invalid_input("determinant needs a square matrix"));
    }
    let dim = m.rows();
    let nm = nalgebra::DMatrix::from_fn(dim, dim, |i, j| m[(i, j)]);
    Ok(nm.determinant())
}

fn seeded_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn complex_gaussian(rng: &mut ChaCha12Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Haar-random pure state: i.i.d. standard complex Gaussian vector,
/// normalized. Deterministic in `seed`.
pub fn haar_random_state(seed: u64, dim: usize) -> Result<PureState, Error> {
    if dim == 0 {
        return Err(Error::invalid_input("state dimension must be positive"));
    }
    let mut rng = seeded_rng(seed);
    let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
    PureState::normalized(v)
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the
/// R-diagonal phase fixed positive (Gram-Schmidt yields this directly).
/// Deterministic in `seed`.
pub fn haar_random_unitary(seed: u64, dim: usize) -> Result<UnitaryMatrix, Error> {
    if dim == 0 {
        return Err(Error::invalid_input("unitary dimension must be positive"));
    }
    let mut rng = seeded_rng(seed);
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| (0..dim).map(|_| complex_gaussian(&mut rng)).collect())
        .collect();
    // Modified Gram-Schmidt with one re-orthogonalization pass.
    for j in 0..dim {
        for _ in 0..2 {
            for k in 0..j {
                let proj: C64 = cols[k]
                    .iter()
                    .zip(&cols[j])
                    .map(|(q, v)| q.conj() * v)
                    .sum();
                let qk = cols[k].clone();
                for (v, q) in cols[j].iter_mut().zip(&qk) {
                    *v -= proj * q;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut cols[j] {
            *v /= norm;
        }
    }
    let m = ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i]);
    UnitaryMatrix::new(m)
}

/// Haar-random density matrix of the given rank: mixture of `rank`
/// Haar-random pure states with Dirichlet-flat weights.
pub fn haar_random_density(seed: u64, dim: usize, rank: usize) -> Result<DensityMatrix, Error> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::invalid_input("need 1 <= rank <= dim"));
    }
    let u = haar_random_unitary(seed, dim)?;
    let mut rng = seeded_rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut weights: Vec<f64> = (0..rank)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            let w: f64 = StandardNormal.sample(&mut rng);
            z * z + w * w
        })
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (k, w) in weights.iter().enumerate() {
        let col: Vec<C64> = (0..dim).map(|i| u.matrix()[(i, k)]).collect();
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] += C64::new(*w, 0.0) * col[i] * col[j].conj();
            }
        }
    }
    // Symmetrize away the last bits of rounding.
    let herm = m.add(&m.dagger())?.scale(C64::new(0.5, 0.0));
    DensityMatrix::new(herm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap()
    }

    fn random_matrix(seed: u64, n: usize) -> ComplexMatrix {
        let mut rng = seeded_rng(seed);
        ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng))
    }

    #[test]
    fn matmul_identity() {
        let m = random_matrix(1, 2);
        let id = ComplexMatrix::identity(2);
        assert_eq!(id.matmul(&m).unwrap(), m);
    }

    #[test]
    fn matmul_pauli_x_involution() {
        let x = pauli_x();
        let id = ComplexMatrix::identity(2);
        assert!(x.matmul(&x).unwrap().max_abs_diff(&id) == 0.0);
    }

    #[test]
    fn matmul_matches_triple_loop_oracle() {
        let a = random_matrix(11, 3);
        let b = random_matrix(12, 3);
        // Independent O(n^3) loop.
        let mut oracle = ComplexMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = ZERO;
                for k in 0..3 {
                    acc += a[(i, k)] * b[(k, j)];
                }
                oracle[(i, j)] = acc;
            }
        }
        assert!(a.matmul(&b).unwrap().max_abs_diff(&oracle) < 1e-14);
    }

    #[test]
    fn matmul_rejects_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn dagger_fixes_hermitian() {
        let h = ComplexMatrix::from_rows(vec![
            vec![ONE, C64::new(0.0, 1.0)],
            vec![C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(h.dagger(), h);
    }

    #[test]
    fn dagger_of_product_reverses() {
        let u = haar_random_unitary(3, 4).unwrap();
        let v = haar_random_unitary(4, 4).unwrap();
        let lhs = u.matrix().matmul(v.matrix()).unwrap().dagger();
        let rhs = v.matrix().dagger().matmul(&u.matrix().dagger()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn dagger_conjugates_diagonal() {
        let d = ComplexMatrix::from_rows(vec![
            vec![ONE, ZERO],
            vec![ZERO, C64::new(0.0, 1.0)],
        ])
        .unwrap();
        let expect = ComplexMatrix::from_rows(vec![
            vec![ONE, ZERO],
            vec![ZERO, C64::new(0.0, -1.0)],
        ])
        .unwrap();
        assert_eq!(d.dagger(), expect);
    }

    #[test]
    fn dagger_is_involutive() {
        let m = random_matrix(7, 5);
        assert_eq!(m.dagger().dagger(), m);
    }

    #[test]
    fn tensor_identities() {
        let id2 = ComplexMatrix::identity(2);
        assert_eq!(id2.tensor(&id2), ComplexMatrix::identity(4));
    }

    #[test]
    fn tensor_basis_bookkeeping() {
        // |0><0| (x) |1><1| has its single 1 at (1,1).
        let p0 = PureState::basis(2, 0).projector();
        let p1 = PureState::basis(2, 1).projector();
        let t = p0.tensor(&p1);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if (i, j) == (1, 1) { ONE } else { ZERO };
                assert_eq!(t[(i, j)], expect);
            }
        }
    }

    #[test]
    fn tensor_trace_multiplicative() {
        let a = random_matrix(21, 2);
        let b = random_matrix(22, 3);
        let lhs = a.tensor(&b).trace().unwrap();
        let rhs = a.trace().unwrap() * b.trace().unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn tensor_is_associative() {
        let a = random_matrix(31, 2);
        let b = random_matrix(32, 2);
        let c = random_matrix(33, 3);
        assert!(a.tensor(&b).tensor(&c).max_abs_diff(&a.tensor(&b.tensor(&c))) < 1e-12);
    }

    #[test]
    fn trace_identity_and_pauli() {
        assert_eq!(ComplexMatrix::identity(5).trace().unwrap(), C64::new(5.0, 0.0));
        assert_eq!(pauli_x().trace().unwrap(), ZERO);
        assert!(ComplexMatrix::zeros(2, 3).trace().is_err());
    }

    #[test]
    fn trace_cyclicity() {
        for seed in 0..5u64 {
            let a = random_matrix(100 + seed, 16);
            let b = random_matrix(200 + seed, 16);
            let ab = a.matmul(&b).unwrap().trace().unwrap();
            let ba = b.matmul(&a).unwrap().trace().unwrap();
            assert!((ab - ba).norm() < 1e-10);
        }
    }

    #[test]
    fn haar_state_dim_one_is_phase() {
        let psi = haar_random_state(5, 1).unwrap();
        assert!((psi.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_state_deterministic() {
        let a = haar_random_state(42, 6).unwrap();
        let b = haar_random_state(42, 6).unwrap();
        assert_eq!(a, b);
        assert!(haar_random_state(0, 0).is_err());
    }

    #[test]
    fn haar_state_first_moment() {
        // Mean of |<0|psi>|^2 over Haar at dim 2 is 1/2.
        let samples = 10_000u64;
        let mean: f64 = (0..samples)
            .map(|s| haar_random_state(s, 2).unwrap().amplitudes()[0].norm_sqr())
            .sum::<f64>()
            / samples as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean was {mean}");
    }

    #[test]
    fn haar_unitary_dim_one() {
        let u = haar_random_unitary(9, 1).unwrap();
        assert!((u.matrix()[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_unitary_contract_up_to_64() {
        for &dim in &[2usize, 8, 64] {
            let u = haar_random_unitary(dim as u64, dim).unwrap();
            let gram = u.matrix().dagger().matmul(u.matrix()).unwrap();
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(dim)) <= 1e-10);
        }
    }

    #[test]
    fn haar_unitary_det_modulus_one() {
        let dim = 8;
        let u = haar_random_unitary(77, dim).unwrap();
        let nm = nalgebra::DMatrix::from_fn(dim, dim, |i, j| u.matrix()[(i, j)]);
        assert!((nm.determinant().norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn haar_unitary_deterministic() {
        assert_eq!(haar_random_unitary(3, 5).unwrap(), haar_random_unitary(3, 5).unwrap());
    }

    #[test]
    fn density_matrix_validation() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!((rho.matrix().trace().unwrap() - ONE).norm() < 1e-12);

        // Trace != 1 rejected.
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());

        // Hermitian, unit trace, but not PSD.
        let bad = ComplexMatrix::from_rows(vec![
            vec![C64::new(1.5, 0.0), ZERO],
            vec![ZERO, C64::new(-0.5, 0.0)],
        ])
        .unwrap();
        assert!(DensityMatrix::new(bad).is_err());
    }

    #[test]
    fn haar_density_is_valid_and_reconstructs() {
        let rho = haar_random_density(13, 4, 2).unwrap();
        assert!(rho.purity() < 1.0 - 1e-6);
        let (vals, vecs) = hermitian_eigen(rho.matrix());
        let mut recon = ComplexMatrix::zeros(4, 4);
        for (v, vec) in vals.iter().zip(&vecs) {
            for i in 0..4 {
                for j in 0..4 {
                    recon[(i, j)] += C64::new(*v, 0.0) * vec[i] * vec[j].conj();
                }
            }
        }
        assert!(recon.max_abs_diff(rho.matrix()) < 1e-10);
    }
}
