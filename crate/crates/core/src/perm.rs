//! Exact symmetric-group engine: composition, parity, cycle structure,
//! the permutation families used by the measurement protocols, and the
//! tensor-factor unitary representation.
//!
//! Conventions, pinned once for the whole crate:
//!
//! - Elements are 0-based internally; every display and file format uses
//!   1-based labels.
//! - Composition is apply-right-first: `compose(p, q)(x) = p(q(x))`. The
//!   unitary representation is then a homomorphism with matrix-product
//!   order, `U_{p.q} = U_p U_q`, so operator expressions like `A B A B`
//!   translate verbatim into `compose` chains.
//! - `cycle_shift(n)` is the left-shift n-cycle `1 -> n, k -> k-1`; its
//!   unitary shifts tensor factors left. The increasing cycle
//!   `(1 2 ... n)` is its inverse.

use crate::linalg::{ComplexMatrix, UnitaryMatrix, ONE};
use crate::{Error, SIZE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

/// Exact element of the symmetric group on `n` points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// From 0-based images; `images[i]` is the image of `i`.
    pub fn new(images: Vec<usize>) -> Result<Self, Error> {
        let n = images.len();
        if n == 0 {
            return Err(Error::invalid_input("permutation must act on at least one point"));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::invalid_input("images do not form a bijection"));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// From 1-based images as written in one-line notation.
    pub fn from_one_line(images: &[usize]) -> Result<Self, Error> {
        if images.iter().any(|&x| x == 0) {
            return Err(Error::invalid_input("one-line notation is 1-based"));
        }
        Permutation::new(images.iter().map(|&x| x - 1).collect())
    }

    /// From disjoint cycles with 1-based labels.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, Error> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for window in 0..cycle.len() {
                let from = cycle[window];
                let to = cycle[(window + 1) % cycle.len()];
                if from == 0 || from > n || to == 0 || to > n {
                    return Err(Error::invalid_input("cycle label out of range"));
                }
                if touched[from - 1] {
                    return Err(Error::invalid_input("cycles are not disjoint"));
                }
                touched[from - 1] = true;
                images[from - 1] = to - 1;
            }
        }
        Permutation::new(images)
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// 1-based images, for display and interchange.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Function composition, apply-right-first: `result(x) = p(q(x))`.
    pub fn compose(&self, q: &Permutation) -> Result<Permutation, Error> {
        if self.n() != q.n() {
            return Err(Error::dim_mismatch(format!(
                "cannot compose permutations of sizes {} and {}",
                self.n(),
                q.n()
            )));
        }
        Ok(Permutation {
            images: (0..self.n()).map(|x| self.images[q.images[x]]).collect(),
        })
    }

    /// Product of several factors read as an operator expression,
    /// i.e. the rightmost factor applies first.
    pub fn product(factors: &[&Permutation]) -> Result<Permutation, Error> {
        let n = factors.last().expect("nonempty product").n();
        let mut acc = Permutation::identity(n);
        for p in factors.iter().rev() {
            acc = p.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// Disjoint cycles in canonical form: each cycle rotated so its
    /// minimum is first, cycles sorted by minimum, fixed points omitted.
    /// Labels are 1-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Number of disjoint cycles including fixed points.
    fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.n()];
        let mut count = 0;
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
            }
        }
        count
    }

    /// `(n - #cycles) mod 2`; agrees with counting transpositions in any
    /// decomposition.
    pub fn parity(&self) -> Parity {
        if (self.n() - self.cycle_count()) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_n_cycle(&self) -> bool {
        self.cycle_count() == 1
    }
}

impl std::fmt::Display for Permutation {
    /// One-line notation with 1-based images, e.g. `[3,1,2]`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let items: Vec<String> = self.one_line().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", items.join(","))
    }
}

/// Canonical cycle-notation string, e.g. `(1 3 2)(4 5)`; identity is `()`.
pub fn format_cycles(p: &Permutation) -> String {
    let cycles = p.cycles();
    if cycles.is_empty() {
        return "()".to_string();
    }
    cycles
        .iter()
        .map(|c| {
            let items: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            format!("({})", items.join(" "))
        })
        .collect()
}

/// Parse either one-line notation `[3,1,2]` or cycle notation
/// `(1 3 2)(4 5)`. Cycle parsing needs the group size `n`.
pub fn parse_permutation(s: &str, n: Option<usize>) -> Result<Permutation, Error> {
    let s = s.trim();
    if s.starts_with('[') && s.ends_with(']') {
        let inner = &s[1..s.len() - 1];
        let images: Vec<usize> = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid_input(format!("bad one-line entry {t:?}")))
            })
            .collect::<Result<_, _>>()?;
        return Permutation::from_one_line(&images);
    }
    if s.starts_with('(') && s.ends_with(')') {
        let n = n.ok_or_else(|| Error::invalid_input("cycle notation requires a group size"))?;
        let mut cycles = Vec::new();
        for part in s.split(')') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let part = part
                .strip_prefix('(')
                .ok_or_else(|| Error::invalid_input("malformed cycle notation"))?;
            if part.trim().is_empty() {
                continue; // "()" is the identity
            }
            let cycle: Vec<usize> = part
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::invalid_input(format!("bad cycle label {t:?}")))
                })
                .collect::<Result<_, _>>()?;
            cycles.push(cycle);
        }
        return Permutation::from_cycles(n, &cycles);
    }
    Err(Error::invalid_input(format!("unrecognized permutation syntax: {s:?}")))
}

/// The left-shift n-cycle `C_n`: `1 -> n`, `k -> k-1` for `k >= 2`.
pub fn cycle_shift(n: usize) -> Permutation {
    assert!(n >= 1);
    let images = (0..n).map(|x| if x == 0 { n - 1 } else { x - 1 }).collect();
    Permutation { images }
}

/// The increasing cycle `(1 2 ... n)`; inverse of [`cycle_shift`].
pub fn right_shift(n: usize) -> Permutation {
    cycle_shift(n).inverse()
}

/// Layer of disjoint adjacent transpositions starting at odd positions:
/// `(1 2)(3 4)...`.
pub fn swap_layer_a(n: usize) -> Permutation {
    adjacent_layer(n, 0)
}

/// Layer of disjoint adjacent transpositions starting at even positions:
/// `(2 3)(4 5)...`.
pub fn swap_layer_b(n: usize) -> Permutation {
    adjacent_layer(n, 1)
}

fn adjacent_layer(n: usize, offset: usize) -> Permutation {
    assert!(n >= 1);
    let mut images: Vec<usize> = (0..n).collect();
    let mut i = offset;
    while i + 1 < n {
        images.swap(i, i + 1);
        i += 2;
    }
    Permutation { images }
}

/// The label sequence `a_j` for the odd-order preprocessing permutation:
/// with `n = 2k+1`, blocks of four labels
/// `(s+1, k+1-s, k+s+2, 2k+1-s)` for `s = 0, 1, ...`, truncated exactly
/// when `n` labels have been produced. Labels are 1-based.
pub fn preprocess_labels(n: usize) -> Result<Vec<usize>, Error> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::invalid_input("preprocessing labels need odd n >= 3"));
    }
    let k = (n - 1) / 2;
    let mut labels = Vec::with_capacity(n);
    let mut s = 0;
    while labels.len() < n {
        for value in [s + 1, k + 1 - s, k + s + 2, 2 * k + 1 - s] {
            if labels.len() < n {
                labels.push(value);
            }
        }
        s += 1;
    }
    Ok(labels)
}

/// The preprocessing permutation `P_n` for the main family, defined by
/// its inverse images `a_j = P_n^{-1}(j)` from [`preprocess_labels`].
pub fn preprocess_perm(n: usize) -> Result<Permutation, Error> {
    let labels = preprocess_labels(n)?;
    let mut images = vec![0; n];
    for (j, &a) in labels.iter().enumerate() {
        images[a - 1] = j;
    }
    Permutation::new(images)
}

/// The alternative odd-order family: with `m = (n+1)/2`,
/// `A_n = (m m+1 ... n)` and `B_n = (1 m n)(2 n-1)...(m-1 m+1)`.
pub fn alt_family(n: usize) -> Result<(Permutation, Permutation), Error> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::invalid_input("the alternative family needs odd n >= 3"));
    }
    let m = (n + 1) / 2;
    let a = Permutation::from_cycles(n, &[(m..=n).collect()])?;
    let mut b_cycles = vec![vec![1, m, n]];
    for j in 2..m {
        b_cycles.push(vec![j, n + 1 - j]);
    }
    let b = Permutation::from_cycles(n, &b_cycles)?;
    Ok((a, b))
}

/// True iff `P_n^{-1} A_n B_n A_n B_n P_n = C_n` as exact permutations
/// (main family).
pub fn verify_conjugacy(n: usize) -> Result<bool, Error> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::invalid_input("conjugacy check needs odd n >= 3"));
    }
    let a = swap_layer_a(n);
    let b = swap_layer_b(n);
    let p = preprocess_perm(n)?;
    let t = Permutation::product(&[&a, &b, &a, &b])?;
    let conj = Permutation::product(&[&p.inverse(), &t, &p])?;
    Ok(conj == cycle_shift(n))
}

/// True iff `A_n B_n A_n^{-1} B_n^{-1} = (1 2 ... n)` for the
/// alternative family.
///
/// Orientation note: under this crate's composition convention the
/// commutator equals the *increasing* cycle, the inverse of
/// [`cycle_shift`]. The switch statistic instead involves the
/// reversed-role commutator `A^{-1} B^{-1} A B`, which is an n-cycle
/// conjugate to `C_n`; the protocol layer computes the exact conjugator
/// rather than assuming it is trivial.
pub fn verify_commutator_identity(n: usize) -> Result<bool, Error> {
    let (a, b) = alt_family(n)?;
    let k = Permutation::product(&[&a, &b, &a.inverse(), &b.inverse()])?;
    Ok(k == right_shift(n))
}

/// Solve `p^{-1} . target . p = reference` for `p`, where both inputs
/// are n-cycles. The orbit of `reference` starting at 1 is mapped onto
/// the orbit of `target` starting at 1, so `p(1) = 1`.
pub fn conjugator_to(target: &Permutation, reference: &Permutation) -> Result<Permutation, Error> {
    if target.n() != reference.n() {
        return Err(Error::dim_mismatch("conjugator size mismatch"));
    }
    if !target.is_n_cycle() || !reference.is_n_cycle() {
        return Err(Error::invalid_input("conjugator construction needs two n-cycles"));
    }
    let n = target.n();
    let mut images = vec![0; n];
    let mut from = 0;
    let mut to = 0;
    for _ in 0..n {
        images[from] = to;
        from = reference.apply(from);
        to = target.apply(to);
    }
    Permutation::new(images)
}

/// Ordered pairs of tuple positions `(i, T^{-1}(i))` whose inner
/// products multiply to `Tr(T psi_sw)`; positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSet {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairSet {
    pub fn new(n: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self, Error> {
        if pairs.len() != n {
            return Err(Error::invalid_input("pair set must contain exactly n pairs"));
        }
        pairs.sort();
        let firsts: Vec<usize> = pairs.iter().map(|&(i, _)| i).collect();
        if firsts != (1..=n).collect::<Vec<_>>() {
            return Err(Error::invalid_input(
                "pair-set first components must be a permutation of 1..=n",
            ));
        }
        Ok(PairSet { n, pairs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Pairs sorted by first component.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Second component of the pair with the given first component.
    fn partner(&self, i: usize) -> usize {
        self.pairs[i - 1].1
    }
}

/// The pair set of a permutation: `{(i, t^{-1}(i))}` over all positions.
pub fn pairs_from_permutation(t: &Permutation) -> PairSet {
    let inv = t.inverse();
    let pairs = (1..=t.n()).map(|i| (i, inv.apply(i - 1) + 1)).collect();
    PairSet { n: t.n(), pairs }
}

/// The main-family operator `T_n = A_n B_n A_n B_n` as a permutation.
pub fn main_family_word(n: usize) -> Result<Permutation, Error> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::invalid_input("the main family word needs odd n >= 3"));
    }
    let a = swap_layer_a(n);
    let b = swap_layer_b(n);
    Permutation::product(&[&a, &b, &a, &b])
}

/// One step of the pair-set recursion for the main family: build the
/// order `n+2` set from the order `n` set by keeping every pair,
/// rewriting `(n-2, n-1) -> (n-2, n+2)` and `(n, n-3) -> (n, n+1)`, and
/// adding `(n+1, n-3)` and `(n+2, n-1)`.
pub fn lemma5_step(i_n: &PairSet) -> Result<PairSet, Error> {
    let n = i_n.n();
    if n < 5 || n % 2 == 0 {
        return Err(Error::invalid_input("pair-set recursion needs odd n >= 5"));
    }
    if i_n != &pairs_from_permutation(&main_family_word(n)?) {
        return Err(Error::invalid_input(
            "input pair set does not match the main-family structure at this order",
        ));
    }
    if i_n.partner(n - 2) != n - 1 || i_n.partner(n) != n - 3 {
        return Err(Error::invalid_input("pair set lacks the expected boundary pairs"));
    }
    let mut pairs = i_n.pairs.clone();
    for pair in &mut pairs {
        if *pair == (n - 2, n - 1) {
            *pair = (n - 2, n + 2);
        } else if *pair == (n, n - 3) {
            *pair = (n, n + 1);
        }
    }
    pairs.push((n + 1, n - 3));
    pairs.push((n + 2, n - 1));
    PairSet::new(n + 2, pairs)
}

/// All `n!` elements of `S_n`, in lexicographic one-line order. Only
/// sensible for small `n`; callers doing exhaustive searches should cap
/// `n` themselves.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    fn build(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(Permutation { images: prefix.clone() });
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                build(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    build(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// The permutation induced on composite indices `{0, ..., d^n - 1}` by
/// the tensor-factor action of `p` at local dimension `d`. Digits are
/// big-endian: factor 1 is most significant.
pub fn index_permutation(p: &Permutation, local_dim: usize) -> Result<Vec<usize>, Error> {
    let n = p.n();
    let size = checked_power(local_dim, n)?;
    let inv = p.inverse();
    let mut out = vec![0usize; size];
    let mut digits = vec![0usize; n];
    for (source, slot) in out.iter_mut().enumerate() {
        let mut rem = source;
        for k in (0..n).rev() {
            digits[k] = rem % local_dim;
            rem /= local_dim;
        }
        let mut target = 0usize;
        for k in 0..n {
            target = target * local_dim + digits[inv.apply(k)];
        }
        *slot = target;
    }
    Ok(out)
}

fn checked_power(d: usize, n: usize) -> Result<usize, Error> {
    if d == 0 {
        return Err(Error::invalid_input("local dimension must be positive"));
    }
    let mut size = 1usize;
    for _ in 0..n {
        size = size.saturating_mul(d);
        if size > SIZE_CAP {
            return Err(Error::SizeCap { required: size, cap: SIZE_CAP });
        }
    }
    Ok(size)
}

/// The `d^n x d^n` permutation matrix representing `p` on the n-fold
/// tensor power, acting as
/// `U (|x_1> ... |x_n>) = |x_{p^{-1}(1)}> ... |x_{p^{-1}(n)}>`.
pub fn perm_to_unitary(p: &Permutation, local_dim: usize) -> Result<UnitaryMatrix, Error> {
    let sigma = index_permutation(p, local_dim)?;
    let size = sigma.len();
    let mut m = ComplexMatrix::zeros(size, size);
    for (source, &target) in sigma.iter().enumerate() {
        m[(target, source)] = ONE;
    }
    Ok(UnitaryMatrix::trusted(m))
}

/// Exact determinant sign of `perm_to_unitary(p, d)`, computed
/// combinatorially as the parity of the induced index permutation.
pub fn unitary_determinant_sign(p: &Permutation, local_dim: usize) -> Result<i32, Error> {
    let sigma = index_permutation(p, local_dim)?;
    let mut seen = vec![false; sigma.len()];
    let mut transpositions = 0usize;
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = sigma[x];
            len += 1;
        }
        transpositions += len - 1;
    }
    Ok(if transpositions % 2 == 0 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_random_state, PureState};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn random_perm(seed: u64, n: usize) -> Permutation {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut rng);
        Permutation::new(images).unwrap()
    }

    #[test]
    fn compose_inverse_is_identity() {
        let p = random_perm(1, 8);
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn compose_applies_right_first() {
        // (1 2) . (2 3) = (1 2 3): check 3 -> 2 -> 1.
        let p = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        let q = Permutation::from_cycles(3, &[vec![2, 3]]).unwrap();
        let r = p.compose(&q).unwrap();
        assert_eq!(r, Permutation::from_cycles(3, &[vec![1, 2, 3]]).unwrap());
        assert_eq!(r.apply(2), 0);
    }

    #[test]
    fn compose_rejects_size_mismatch() {
        let p = Permutation::identity(3);
        let q = Permutation::identity(4);
        assert!(p.compose(&q).is_err());
    }

    #[test]
    fn transposition_ladder_is_left_shift() {
        // (n n-1)(n-1 n-2)...(2 1) = C_n at n = 6, verified pointwise.
        let n = 6;
        let factors: Vec<Permutation> = (1..n)
            .rev()
            .map(|i| Permutation::from_cycles(n, &[vec![i + 1, i]]).unwrap())
            .collect();
        let refs: Vec<&Permutation> = factors.iter().collect();
        let prod = Permutation::product(&refs).unwrap();
        assert_eq!(prod, cycle_shift(n));
        for x in 0..n {
            let expect = if x == 0 { n - 1 } else { x - 1 };
            assert_eq!(prod.apply(x), expect);
        }
    }

    #[test]
    fn inverse_examples() {
        assert!(Permutation::identity(4).inverse().is_identity());
        let t = Permutation::from_cycles(5, &[vec![2, 4]]).unwrap();
        assert_eq!(t.inverse(), t);
        for n in 1..=12 {
            let inv = cycle_shift(n).inverse();
            for x in 0..n {
                assert_eq!(inv.apply(x), (x + 1) % n);
            }
        }
    }

    #[test]
    fn parity_examples() {
        assert_eq!(Permutation::identity(5).parity(), Parity::Even);
        assert_eq!(cycle_shift(3).parity(), Parity::Even);
        assert_eq!(cycle_shift(4).parity(), Parity::Odd);
    }

    #[test]
    fn parity_is_homomorphism() {
        for seed in 0..40u64 {
            let n = 2 + (seed as usize % 9);
            let p = random_perm(seed, n);
            let q = random_perm(seed + 1000, n);
            assert_eq!(
                p.compose(&q).unwrap().parity(),
                p.parity().combine(q.parity())
            );
        }
    }

    #[test]
    fn cycle_shift_examples() {
        assert!(cycle_shift(1).is_identity());
        assert_eq!(cycle_shift(3).one_line(), vec![3, 1, 2]);
        for n in 1..=12 {
            let c = cycle_shift(n);
            let mut acc = Permutation::identity(n);
            for _ in 0..n {
                acc = c.compose(&acc).unwrap();
            }
            assert!(acc.is_identity());
        }
    }

    #[test]
    fn swap_layers_match_worked_cases() {
        assert_eq!(swap_layer_a(3), Permutation::from_cycles(3, &[vec![1, 2]]).unwrap());
        assert_eq!(swap_layer_b(3), Permutation::from_cycles(3, &[vec![2, 3]]).unwrap());
        assert_eq!(
            swap_layer_a(5),
            Permutation::from_cycles(5, &[vec![1, 2], vec![3, 4]]).unwrap()
        );
        assert_eq!(
            swap_layer_b(5),
            Permutation::from_cycles(5, &[vec![2, 3], vec![4, 5]]).unwrap()
        );
        assert!(swap_layer_a(1).is_identity());
        assert!(swap_layer_b(1).is_identity());
    }

    #[test]
    fn swap_layers_are_involutions_and_word_is_n_cycle() {
        for n in (3..=41).step_by(2) {
            let a = swap_layer_a(n);
            let b = swap_layer_b(n);
            assert!(a.compose(&a).unwrap().is_identity());
            assert!(b.compose(&b).unwrap().is_identity());
            assert!(main_family_word(n).unwrap().is_n_cycle());
        }
    }

    #[test]
    fn preprocess_labels_worked_cases() {
        assert_eq!(preprocess_labels(3).unwrap(), vec![1, 2, 3]);
        assert!(preprocess_perm(3).unwrap().is_identity());
        assert_eq!(preprocess_labels(5).unwrap(), vec![1, 3, 4, 5, 2]);
        assert_eq!(preprocess_labels(7).unwrap(), vec![1, 4, 5, 7, 2, 3, 6]);
        assert!(preprocess_perm(4).is_err());
        assert!(preprocess_perm(1).is_err());
    }

    #[test]
    fn conjugacy_holds_for_odd_orders() {
        for n in (3..=41).step_by(2) {
            assert!(verify_conjugacy(n).unwrap(), "conjugacy failed at n = {n}");
        }
    }

    #[test]
    fn preprocess_agrees_with_conjugator_oracle() {
        // Independent construction: orbit-matching conjugator from the
        // main-family word to C_n, anchored so p(1) = 1, must equal the
        // closed-form labels.
        for n in (3..=21).step_by(2) {
            let t = main_family_word(n).unwrap();
            let p = conjugator_to(&t, &cycle_shift(n)).unwrap();
            let check = Permutation::product(&[&p.inverse(), &t, &p]).unwrap();
            assert_eq!(check, cycle_shift(n));
            assert_eq!(p, preprocess_perm(n).unwrap(), "mismatch at n = {n}");
        }
    }

    #[test]
    fn alt_family_worked_cases() {
        let (a3, b3) = alt_family(3).unwrap();
        assert_eq!(a3, Permutation::from_cycles(3, &[vec![2, 3]]).unwrap());
        assert_eq!(b3, Permutation::from_cycles(3, &[vec![1, 2, 3]]).unwrap());
        // B_3 = SWAP_{1,2} SWAP_{2,3} as an operator product.
        let s12 = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        let s23 = Permutation::from_cycles(3, &[vec![2, 3]]).unwrap();
        assert_eq!(b3, s12.compose(&s23).unwrap());

        let (a5, b5) = alt_family(5).unwrap();
        assert_eq!(a5, Permutation::from_cycles(5, &[vec![3, 4, 5]]).unwrap());
        assert_eq!(b5, Permutation::from_cycles(5, &[vec![1, 3, 5], vec![2, 4]]).unwrap());

        let (a7, b7) = alt_family(7).unwrap();
        assert_eq!(a7, Permutation::from_cycles(7, &[vec![4, 5, 6, 7]]).unwrap());
        assert_eq!(
            b7,
            Permutation::from_cycles(7, &[vec![1, 4, 7], vec![2, 6], vec![3, 5]]).unwrap()
        );

        assert!(alt_family(4).is_err());
    }

    #[test]
    fn commutator_identity_holds_for_odd_orders() {
        for n in (3..=41).step_by(2) {
            assert!(
                verify_commutator_identity(n).unwrap(),
                "commutator identity failed at n = {n}"
            );
        }
    }

    #[test]
    fn identity_inputs_never_satisfy_commutator_pattern() {
        for n in 2..=8 {
            let id = Permutation::identity(n);
            let k = Permutation::product(&[&id, &id, &id.inverse(), &id.inverse()]).unwrap();
            assert_ne!(k, right_shift(n));
        }
    }

    #[test]
    fn alt_family_switch_word_is_conjugate_to_cycle() {
        // The reversed-role commutator A^-1 B^-1 A B is an n-cycle; at
        // n = 3 it is exactly C_3, at larger n only conjugate to it.
        for n in (3..=41).step_by(2) {
            let (a, b) = alt_family(n).unwrap();
            let d = Permutation::product(&[&a.inverse(), &b.inverse(), &a, &b]).unwrap();
            assert!(d.is_n_cycle(), "not an n-cycle at n = {n}");
            if n == 3 {
                assert_eq!(d, cycle_shift(3));
            }
            let p = conjugator_to(&d, &cycle_shift(n)).unwrap();
            let check = Permutation::product(&[&p.inverse(), &d, &p]).unwrap();
            assert_eq!(check, cycle_shift(n));
        }
    }

    #[test]
    fn pair_sets_identity_and_main_family() {
        let id = Permutation::identity(4);
        let pairs = pairs_from_permutation(&id);
        assert_eq!(pairs.pairs(), &[(1, 1), (2, 2), (3, 3), (4, 4)]);

        // n = 5 main family with the Eq-(20) labels reproduces the
        // plain chain ordering.
        let labels = preprocess_labels(5).unwrap();
        let t = main_family_word(5).unwrap();
        let pairs = pairs_from_permutation(&t);
        let mut resolved: Vec<(usize, usize)> = pairs
            .pairs()
            .iter()
            .map(|&(i, j)| (labels[i - 1], labels[j - 1]))
            .collect();
        resolved.sort();
        assert_eq!(resolved, vec![(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]);
    }

    #[test]
    fn lemma5_step_matches_direct_pairs() {
        for n in (5..=19).step_by(2) {
            let i_n = pairs_from_permutation(&main_family_word(n).unwrap());
            let stepped = lemma5_step(&i_n).unwrap();
            let direct = pairs_from_permutation(&main_family_word(n + 2).unwrap());
            assert_eq!(stepped, direct, "recursion mismatch at n = {n}");
            assert_eq!(stepped.pairs().len(), i_n.pairs().len() + 2);
        }
    }

    #[test]
    fn lemma5_step_rejects_foreign_sets() {
        let wrong = pairs_from_permutation(&cycle_shift(7));
        assert!(lemma5_step(&wrong).is_err());
    }

    #[test]
    fn perm_to_unitary_basic_cases() {
        let id = perm_to_unitary(&Permutation::identity(2), 2).unwrap();
        assert_eq!(id.matrix(), &ComplexMatrix::identity(4));

        let swap = perm_to_unitary(&Permutation::from_cycles(2, &[vec![1, 2]]).unwrap(), 2).unwrap();
        let mut expect = ComplexMatrix::zeros(4, 4);
        expect[(0, 0)] = ONE;
        expect[(1, 2)] = ONE;
        expect[(2, 1)] = ONE;
        expect[(3, 3)] = ONE;
        assert_eq!(swap.matrix(), &expect);
    }

    #[test]
    fn cycle_unitary_shifts_factors_left() {
        // C_3 at d = 2 maps |abc> to |bca> for all 8 basis states.
        let sigma = index_permutation(&cycle_shift(3), 2).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let source = 4 * a + 2 * b + c;
                    let target = 4 * b + 2 * c + a;
                    assert_eq!(sigma[source], target);
                }
            }
        }
    }

    #[test]
    fn perm_to_unitary_is_homomorphism() {
        for seed in 0..10u64 {
            let p = random_perm(seed, 4);
            let q = random_perm(seed + 50, 4);
            let lhs = perm_to_unitary(&p.compose(&q).unwrap(), 2).unwrap();
            let rhs = perm_to_unitary(&p, 2).unwrap().matmul(&perm_to_unitary(&q, 2).unwrap()).unwrap();
            assert_eq!(lhs.matrix(), rhs.matrix());
            // Inverse maps to conjugate transpose, exact 0/1 entries.
            assert_eq!(
                perm_to_unitary(&p.inverse(), 2).unwrap().matrix(),
                &perm_to_unitary(&p, 2).unwrap().matrix().dagger()
            );
        }
    }

    #[test]
    fn perm_unitary_acts_by_inverse_relabeling() {
        // U (|x_1 x_2 x_3>) = |x_{p^{-1}(1)} x_{p^{-1}(2)} x_{p^{-1}(3)}>.
        let p = random_perm(3, 3);
        let states: Vec<PureState> = (0..3).map(|i| haar_random_state(40 + i, 2).unwrap()).collect();
        let joint = states[0].tensor(&states[1]).tensor(&states[2]);
        let u = perm_to_unitary(&p, 2).unwrap();
        let moved = u.matrix().apply(joint.amplitudes()).unwrap();
        let inv = p.inverse();
        let expect = states[inv.apply(0)]
            .tensor(&states[inv.apply(1)])
            .tensor(&states[inv.apply(2)]);
        let diff: f64 = moved
            .iter()
            .zip(expect.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn perm_to_unitary_respects_size_cap() {
        let p = Permutation::identity(13);
        assert!(matches!(perm_to_unitary(&p, 2), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn determinant_sign_examples() {
        assert_eq!(unitary_determinant_sign(&Permutation::identity(3), 3).unwrap(), 1);
        let swap = Permutation::from_cycles(2, &[vec![1, 2]]).unwrap();
        assert_eq!(unitary_determinant_sign(&swap, 2).unwrap(), -1);
        // C_4 is three transpositions, but each SWAP is padded with
        // identity on the remaining d^2 = 4 dimensions, so its
        // representation determinant is (-1)^4 = +1 and the product is
        // +1 (not the -1 of the bare two-factor SWAP).
        assert_eq!(unitary_determinant_sign(&cycle_shift(4), 2).unwrap(), 1);
        // At two factors there is no padding and the sign survives.
        assert_eq!(unitary_determinant_sign(&cycle_shift(2), 2).unwrap(), -1);
    }

    #[test]
    fn determinant_sign_formula() {
        // det U_p = (-1)^{parity(p) * d(d-1)/2 * d^(n-2)} for n <= 6,
        // d <= 4 within the size cap: a transposition acts as SWAP on
        // two factors padded with identity on the other d^(n-2)
        // dimensions, and det(SWAP_d) = (-1)^{d(d-1)/2}.
        for n in 2..=6usize {
            for d in 2..=4usize {
                if d.pow(n as u32) > SIZE_CAP {
                    continue;
                }
                for seed in 0..5u64 {
                    let p = random_perm(seed * 31 + n as u64, n);
                    let t = match p.parity() {
                        Parity::Even => 0,
                        Parity::Odd => 1,
                    };
                    let exponent = t * (d * (d - 1) / 2) * d.pow(n as u32 - 2);
                    let expect = if exponent % 2 == 0 { 1 } else { -1 };
                    assert_eq!(unitary_determinant_sign(&p, d).unwrap(), expect, "n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn no_permutation_solution_for_even_cycle() {
        // Exhaustive: no (P, A, B) in S_4^3 satisfies
        // C_4 = P^-1 A^-1 B^-1 A B P.
        let mut all = Vec::new();
        let mut images = [0usize; 4];
        fn gen(depth: usize, used: &mut [bool; 4], images: &mut [usize; 4], out: &mut Vec<Permutation>) {
            if depth == 4 {
                out.push(Permutation::new(images.to_vec()).unwrap());
                return;
            }
            for x in 0..4 {
                if !used[x] {
                    used[x] = true;
                    images[depth] = x;
                    gen(depth + 1, used, images, out);
                    used[x] = false;
                }
            }
        }
        gen(0, &mut [false; 4], &mut images, &mut all);
        assert_eq!(all.len(), 24);
        let c4 = cycle_shift(4);
        for p in &all {
            for a in &all {
                for b in &all {
                    let word = Permutation::product(&[
                        &p.inverse(),
                        &a.inverse(),
                        &b.inverse(),
                        a,
                        b,
                        p,
                    ])
                    .unwrap();
                    assert_ne!(word, c4);
                }
            }
        }
    }

    #[test]
    fn notation_round_trips() {
        let p = Permutation::from_one_line(&[3, 1, 2]).unwrap();
        assert_eq!(p.to_string(), "[3,1,2]");
        assert_eq!(format_cycles(&p), "(1 3 2)");
        assert_eq!(parse_permutation("[3,1,2]", None).unwrap(), p);
        assert_eq!(parse_permutation("(1 3 2)", Some(3)).unwrap(), p);
        assert_eq!(format_cycles(&Permutation::identity(4)), "()");
        assert!(parse_permutation("[2,2,1]", None).is_err());
        assert!(parse_permutation("nonsense", None).is_err());
    }
}
