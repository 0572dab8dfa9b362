//! Generalized Gell-Mann generators of su(n) and their structure constants.
//!
//! Generators are ordered as every symmetric `u_jk` (lexicographic in `j < k`),
//! then every antisymmetric `v_jk` in the same order, then the diagonal
//! `w_1 .. w_{n-1}`. The diagonal generators carry a leading minus sign,
//! `w_l = -sqrt(2/(l(l+1))) (P_11 + .. + P_ll - l P_{l+1,l+1})`, so for n = 2 the
//! third generator is `-σ_z` and `f_123 = -1`.
//!
//! With this ordering, su(3) reproduces the familiar table
//! `f_147 = 1`, `f_258 = f_368 = √3/2`, and six entries of magnitude 1/2.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{commutator, hermiticity_deviation, max_abs, trace, CMatrix, C64, I, ONE, ZERO};

/// Entries with `|f| <` this are treated as structural zeros.
pub const F_ZERO_THRESHOLD: f64 = 1e-12;
/// Tolerance for the Gram check and for `verify_basis`.
pub const BASIS_TOLERANCE: f64 = 1e-10;

/// Which family a generator belongs to. Indices are 1-based, as in `u_12`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GeneratorKind {
    U { j: usize, k: usize },
    V { j: usize, k: usize },
    W { l: usize },
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::U { j, k } => write!(f, "u_{j}{k}"),
            GeneratorKind::V { j, k } => write!(f, "v_{j}{k}"),
            GeneratorKind::W { l } => write!(f, "w_{l}"),
        }
    }
}

/// Nonzero entries `(row, col, value)` of a generator.
pub(crate) type SparseEntries = Vec<(usize, usize, C64)>;

pub(crate) fn sparse_entries(m: &CMatrix) -> SparseEntries {
    let mut out = Vec::new();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            if v != ZERO {
                out.push((r, c, v));
            }
        }
    }
    out
}

/// Totally antisymmetric rank-3 tensor stored by its `i < j < k` entries.
///
/// Indices are 0-based in the API; serialised triples are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    size: usize,
    entries: BTreeMap<[usize; 3], f64>,
}

impl StructureConstants {
    /// Number of generators the tensor is indexed by.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of stored (canonically ordered) nonzero triples.
    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    /// `f_ijk` for arbitrary index order, applying the permutation sign.
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        if i == j || j == k || i == k {
            return 0.0;
        }
        let (key, sign) = canonical_order(i, j, k);
        self.entries.get(&key).map_or(0.0, |v| sign * v)
    }

    /// Canonical `i < j < k` triples and their values.
    pub fn iter(&self) -> impl Iterator<Item = ([usize; 3], f64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    /// Visit every nonzero `f_ijk` in all six index orientations.
    pub fn for_each_oriented(&self, mut visit: impl FnMut(usize, usize, usize, f64)) {
        for (&[a, b, c], &v) in &self.entries {
            visit(a, b, c, v);
            visit(b, c, a, v);
            visit(c, a, b, v);
            visit(b, a, c, -v);
            visit(a, c, b, -v);
            visit(c, b, a, -v);
        }
    }
}

fn canonical_order(i: usize, j: usize, k: usize) -> ([usize; 3], f64) {
    let mut idx = [i, j, k];
    let mut sign = 1.0;
    for pass in 0..2 {
        for p in 0..(2 - pass) {
            if idx[p] > idx[p + 1] {
                idx.swap(p, p + 1);
                sign = -sign;
            }
        }
    }
    (idx, sign)
}

/// Ordered su(n) generators together with their structure constants.
#[derive(Debug, Clone)]
pub struct SuBasis {
    dim: usize,
    generators: Vec<CMatrix>,
    kinds: Vec<GeneratorKind>,
    sparse: Vec<SparseEntries>,
    f: StructureConstants,
}

impl SuBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators, `n² - 1`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &CMatrix {
        &self.generators[i]
    }

    pub fn kinds(&self) -> &[GeneratorKind] {
        &self.kinds
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.f
    }

    pub(crate) fn sparse(&self, i: usize) -> &SparseEntries {
        &self.sparse[i]
    }
}

fn projector(n: usize, j: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(j, k)] = ONE;
    m
}

/// Generalized Gell-Mann basis of su(n) in canonical `u, v, w` order.
pub fn build_su_basis(n: usize) -> Result<SuBasis> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let mut generators = Vec::with_capacity(n * n - 1);
    let mut kinds = Vec::with_capacity(n * n - 1);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| ((j + 1)..n).map(move |k| (j, k))).collect();

    for &(j, k) in &pairs {
        generators.push(projector(n, j, k) + projector(n, k, j));
        kinds.push(GeneratorKind::U { j: j + 1, k: k + 1 });
    }
    for &(j, k) in &pairs {
        generators.push((projector(n, j, k) - projector(n, k, j)) * I);
        kinds.push(GeneratorKind::V { j: j + 1, k: k + 1 });
    }
    for l in 1..n {
        let lf = l as f64;
        let scale = -(2.0 / (lf * (lf + 1.0))).sqrt();
        let mut w = CMatrix::zeros(n, n);
        for d in 0..l {
            w[(d, d)] = C64::new(scale, 0.0);
        }
        w[(l, l)] = C64::new(-scale * lf, 0.0);
        generators.push(w);
        kinds.push(GeneratorKind::W { l });
    }

    let f = structure_constants(&generators)?;
    let sparse = generators.iter().map(sparse_entries).collect();
    Ok(SuBasis {
        dim: n,
        generators,
        kinds,
        sparse,
        f,
    })
}

/// `f_ijk = tr([σ_i, σ_j] σ_k) / (4i)` for generators normalised to
/// `tr(σ_i σ_j) = 2 δ_ij`.
///
/// Only `i < j < k` is evaluated; the remaining orientations follow from total
/// antisymmetry, which holds for any orthonormal Hermitian family.
pub fn structure_constants(generators: &[CMatrix]) -> Result<StructureConstants> {
    let count = generators.len();
    let n = generators.first().map_or(0, |g| g.nrows());
    if generators.iter().any(|g| g.nrows() != n || g.ncols() != n) {
        return Err(Error::DimensionMismatch(
            "generators must be square matrices of equal size".into(),
        ));
    }
    let sparse: Vec<SparseEntries> = generators.iter().map(sparse_entries).collect();

    let mut gram_dev: f64 = 0.0;
    for (i, entries) in sparse.iter().enumerate() {
        for (j, other) in generators.iter().enumerate().skip(i) {
            let g: C64 = entries.iter().map(|&(a, b, s)| s * other[(b, a)]).sum();
            let expected = if i == j { 2.0 } else { 0.0 };
            gram_dev = gram_dev.max((g - C64::new(expected, 0.0)).norm());
        }
    }
    if gram_dev > BASIS_TOLERANCE {
        return Err(Error::NotOrthonormal { deviation: gram_dev });
    }

    let mut entries = BTreeMap::new();
    let mut scratch = CMatrix::zeros(n, n);
    for i in 0..count {
        for j in (i + 1)..count {
            scratch.fill(ZERO);
            for &(a, b, s) in &sparse[i] {
                for c in 0..n {
                    scratch[(a, c)] += s * generators[j][(b, c)];
                }
            }
            for &(a, b, s) in &sparse[j] {
                for c in 0..n {
                    scratch[(a, c)] -= s * generators[i][(b, c)];
                }
            }
            for (k, sk) in sparse.iter().enumerate().skip(j + 1) {
                let tr: C64 = sk.iter().map(|&(a, b, v)| scratch[(b, a)] * v).sum();
                // tr = 4i f
                let value = tr.im / 4.0;
                if value.abs() >= F_ZERO_THRESHOLD {
                    entries.insert([i, j, k], value);
                }
            }
        }
    }
    Ok(StructureConstants { size: count, entries })
}

/// Maximum deviations of the defining su(n) identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BasisVerification {
    pub trace: f64,
    pub orthonormality: f64,
    pub hermiticity: f64,
    pub commutator: f64,
}

impl BasisVerification {
    pub fn max_deviation(&self) -> f64 {
        self.trace
            .max(self.orthonormality)
            .max(self.hermiticity)
            .max(self.commutator)
    }

    pub fn passes(&self) -> bool {
        self.max_deviation() < BASIS_TOLERANCE
    }
}

/// Check tracelessness, `tr(σ_i σ_j) = 2δ_ij`, Hermiticity and
/// `[σ_i, σ_j] = 2i Σ_k f_ijk σ_k` entrywise.
pub fn verify_basis(basis: &SuBasis) -> BasisVerification {
    let gens = basis.generators();
    let f = basis.structure_constants();
    let mut report = BasisVerification {
        trace: 0.0,
        orthonormality: 0.0,
        hermiticity: 0.0,
        commutator: 0.0,
    };
    for (i, gi) in gens.iter().enumerate() {
        report.trace = report.trace.max(trace(gi).norm());
        report.hermiticity = report.hermiticity.max(hermiticity_deviation(gi).2);
        for (j, gj) in gens.iter().enumerate() {
            let expected = if i == j { 2.0 } else { 0.0 };
            let g = crate::linalg::trace_of_product(gi, gj);
            report.orthonormality = report.orthonormality.max((g - C64::new(expected, 0.0)).norm());
            if j <= i {
                continue;
            }
            let direct = commutator(gi, gj);
            let mut rebuilt = CMatrix::zeros(basis.dim(), basis.dim());
            for (k, gk) in gens.iter().enumerate() {
                let v = f.get(i, j, k);
                if v != 0.0 {
                    rebuilt += gk * C64::new(0.0, 2.0 * v);
                }
            }
            report.commutator = report.commutator.max(max_abs(&(direct - rebuilt)));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT3_2: f64 = 0.866_025_403_784_438_6;

    fn pauli_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    fn pauli_y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
    }

    fn pauli_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(matches!(build_su_basis(1), Err(Error::InvalidDimension(1))));
        assert!(matches!(build_su_basis(0), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn qubit_basis_is_pauli_up_to_signs() {
        let b = build_su_basis(2).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.generator(0), &pauli_x());
        assert_eq!(b.generator(1), &(-pauli_y()));
        assert_eq!(b.generator(2), &(-pauli_z()));
        // v_12 = -σ_y and w_1 = -σ_z: the two sign flips cancel.
        assert_eq!(b.structure_constants().get(0, 1, 2), 1.0);
        assert!(verify_basis(&b).max_deviation() < 1e-12);
    }

    #[test]
    fn family_counts() {
        for n in 2..=6 {
            let b = build_su_basis(n).unwrap();
            assert_eq!(b.len(), n * n - 1);
            let u = b
                .kinds()
                .iter()
                .filter(|k| matches!(k, GeneratorKind::U { .. }))
                .count();
            let v = b
                .kinds()
                .iter()
                .filter(|k| matches!(k, GeneratorKind::V { .. }))
                .count();
            let w = b
                .kinds()
                .iter()
                .filter(|k| matches!(k, GeneratorKind::W { .. }))
                .count();
            assert_eq!((u, v, w), (n * (n - 1) / 2, n * (n - 1) / 2, n - 1));
        }
    }

    #[test]
    fn su3_orthonormal() {
        let b = build_su_basis(3).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let g = crate::linalg::trace_of_product(b.generator(i), b.generator(j));
                let expected = if i == j { 2.0 } else { 0.0 };
                assert!((g - C64::new(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn su3_table() {
        let b = build_su_basis(3).unwrap();
        let f = b.structure_constants();
        // 1-based triples as tabulated for su(3).
        let table = [
            ((1, 4, 7), 1.0),
            ((2, 1, 6), 0.5),
            ((3, 1, 5), 0.5),
            ((3, 2, 4), 0.5),
            ((2, 5, 7), 0.5),
            ((3, 7, 6), 0.5),
            ((5, 4, 6), 0.5),
            ((3, 6, 8), SQRT3_2),
            ((2, 5, 8), SQRT3_2),
        ];
        for ((i, j, k), v) in table {
            assert!((f.get(i - 1, j - 1, k - 1) - v).abs() < 1e-12, "f_{i}{j}{k}");
        }
        assert_eq!(f.nonzero_count(), table.len());
        assert!(verify_basis(&b).passes());
    }

    #[test]
    fn diagonal_entries_vanish() {
        let b = build_su_basis(4).unwrap();
        let f = b.structure_constants();
        for i in 0..b.len() {
            for k in 0..b.len() {
                assert_eq!(f.get(i, i, k), 0.0);
                assert_eq!(f.get(i, k, i), 0.0);
            }
        }
    }

    #[test]
    fn antisymmetry_under_transpositions() {
        let b = build_su_basis(4).unwrap();
        let f = b.structure_constants();
        for i in 0..b.len() {
            for j in 0..b.len() {
                for k in 0..b.len() {
                    let v = f.get(i, j, k);
                    assert_eq!(f.get(j, i, k), -v);
                    assert_eq!(f.get(i, k, j), -v);
                    assert_eq!(f.get(k, j, i), -v);
                    assert_eq!(f.get(j, k, i), v);
                }
            }
        }
    }

    #[test]
    fn commutator_identity_up_to_five() {
        for n in 2..=5 {
            let b = build_su_basis(n).unwrap();
            let r = verify_basis(&b);
            assert!(r.commutator < 1e-12, "n={n}: {r:?}");
            assert!(r.passes());
        }
    }

    #[test]
    fn scaled_generator_rejected() {
        let b = build_su_basis(3).unwrap();
        let mut gens = b.generators().to_vec();
        gens[4] *= C64::new(2.0, 0.0);
        match structure_constants(&gens) {
            Err(Error::NotOrthonormal { deviation }) => assert!((deviation - 6.0).abs() < 1e-12),
            other => panic!("expected NotOrthonormal, got {other:?}"),
        }
    }

    #[test]
    fn ragged_input_rejected() {
        let gens = vec![pauli_x(), CMatrix::zeros(3, 3)];
        assert!(matches!(
            structure_constants(&gens),
            Err(Error::DimensionMismatch(_))
        ));
    }

    /// Double-double accumulation of `tr([σ_i, σ_j] σ_k)` via error-free
    /// transforms; independent of the sparse scratch path above.
    mod extended {
        #[derive(Clone, Copy)]
        pub struct Dd(pub f64, pub f64);

        fn two_sum(a: f64, b: f64) -> (f64, f64) {
            let s = a + b;
            let bb = s - a;
            (s, (a - (s - bb)) + (b - bb))
        }

        fn two_prod(a: f64, b: f64) -> (f64, f64) {
            let p = a * b;
            (p, a.mul_add(b, -p))
        }

        impl Dd {
            pub fn add(self, o: Dd) -> Dd {
                let (s, e) = two_sum(self.0, o.0);
                let e = e + self.1 + o.1;
                let (hi, lo) = two_sum(s, e);
                Dd(hi, lo)
            }
            pub fn mul(self, o: Dd) -> Dd {
                let (p, e) = two_prod(self.0, o.0);
                let e = e + self.0 * o.1 + self.1 * o.0;
                let (hi, lo) = two_sum(p, e);
                Dd(hi, lo)
            }
            pub fn neg(self) -> Dd {
                Dd(-self.0, -self.1)
            }
            pub fn value(self) -> f64 {
                self.0 + self.1
            }
        }

        #[derive(Clone, Copy)]
        pub struct Cdd(pub Dd, pub Dd);

        impl Cdd {
            pub fn zero() -> Cdd {
                Cdd(Dd(0.0, 0.0), Dd(0.0, 0.0))
            }
            pub fn add(self, o: Cdd) -> Cdd {
                Cdd(self.0.add(o.0), self.1.add(o.1))
            }
            pub fn sub(self, o: Cdd) -> Cdd {
                Cdd(self.0.add(o.0.neg()), self.1.add(o.1.neg()))
            }
            pub fn mul(self, o: Cdd) -> Cdd {
                Cdd(
                    self.0.mul(o.0).add(self.1.mul(o.1).neg()),
                    self.0.mul(o.1).add(self.1.mul(o.0)),
                )
            }
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn su3_constants_stable_under_extended_precision() {
        use extended::{Cdd, Dd};
        let n = 3;
        // Rebuild su(3) directly in double-double so that sqrt(1/3) is exact to ~1e-32.
        let third = Dd(1.0 / 3.0, (1.0 - 3.0 * (1.0 / 3.0_f64)) / 3.0);
        let mut s = Dd(third.value().sqrt(), 0.0);
        // Newton step in double-double: s <- s + (1/3 - s²) / (2s)
        let resid = third.add(s.mul(s).neg());
        s = s.add(Dd(resid.value() / (2.0 * s.0), 0.0));

        let b = build_su_basis(n).unwrap();
        let mut gens: Vec<Vec<Vec<Cdd>>> = b
            .generators()
            .iter()
            .map(|g| {
                (0..n)
                    .map(|r| {
                        (0..n)
                            .map(|c| Cdd(Dd(g[(r, c)].re, 0.0), Dd(g[(r, c)].im, 0.0)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        // w_2 = -(1/√3) diag(1, 1, -2)
        let w2 = &mut gens[7];
        w2[0][0] = Cdd(s.neg(), Dd(0.0, 0.0));
        w2[1][1] = Cdd(s.neg(), Dd(0.0, 0.0));
        w2[2][2] = Cdd(s.add(s), Dd(0.0, 0.0));

        let mul = |a: &Vec<Vec<Cdd>>, bm: &Vec<Vec<Cdd>>| -> Vec<Vec<Cdd>> {
            (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| (0..n).fold(Cdd::zero(), |acc, k| acc.add(a[r][k].mul(bm[k][c]))))
                        .collect()
                })
                .collect()
        };
        let f = b.structure_constants();
        for i in 0..8 {
            for j in 0..8 {
                let ij = mul(&gens[i], &gens[j]);
                let ji = mul(&gens[j], &gens[i]);
                for k in 0..8 {
                    let prod_ijk = mul(&ij, &gens[k]);
                    let prod_jik = mul(&ji, &gens[k]);
                    let tr = (0..n).fold(Cdd::zero(), |acc, d| acc.add(prod_ijk[d][d].sub(prod_jik[d][d])));
                    let high = tr.1.value() / 4.0;
                    assert!((high - f.get(i, j, k)).abs() < 1e-12, "f_{i}{j}{k}");
                }
            }
        }
    }
}
