//! Sign subgroups of `Z₂ⁿ` and the standard complexity-one action on `ℝⁿ`.
//!
//! A sign element is stored additively: coordinate `i` is 1 where the element
//! acts by `−1`. The standard subgroup `{Π gᵢ = 1}` is then the even-weight
//! subspace.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::chain::{quotient_with_subdivision_fallback, CellAction, CellComplex, ChainError};
use crate::gf2::{all_vectors, span_rank, Gf2Matrix, Gf2Vector};
use crate::polytope::binomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StandardActionError {
    InvalidParameter(String),
    LengthMismatch { expected: usize, found: usize },
    CoordinateOutOfRange { coord: usize, n: usize },
    /// A zero weight: the fixed-point set is not discrete.
    ZeroWeight { index: usize },
    /// The listed `n − 1` weights are dependent.
    NotGeneralPosition { dependent: Vec<usize> },
    Chain(ChainError),
}

impl fmt::Display for StandardActionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardActionError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            StandardActionError::LengthMismatch { expected, found } => {
                write!(f, "vector of length {found}, expected {expected}")
            }
            StandardActionError::CoordinateOutOfRange { coord, n } => {
                write!(f, "coordinate {coord} out of range for n = {n}")
            }
            StandardActionError::ZeroWeight { index } => write!(
                f,
                "weight {index} is zero, so fixed points are not isolated"
            ),
            StandardActionError::NotGeneralPosition { dependent } => {
                write!(f, "weights {dependent:?} are linearly dependent")
            }
            StandardActionError::Chain(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for StandardActionError {}

impl From<ChainError> for StandardActionError {
    fn from(e: ChainError) -> Self {
        StandardActionError::Chain(e)
    }
}

/// A subgroup of `Z₂ⁿ` kept as a reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSubgroup {
    ambient_n: usize,
    basis: Vec<Gf2Vector>,
}

impl SignSubgroup {
    /// Subgroup generated by `generators`.
    pub fn from_generators(n: usize, generators: &[Gf2Vector]) -> Result<Self, StandardActionError> {
        if let Some(bad) = generators.iter().find(|g| g.len() != n) {
            return Err(StandardActionError::LengthMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let m = Gf2Matrix::from_rows(n, generators.to_vec()).expect("lengths checked");
        let ech = m.row_echelon();
        let basis = (0..ech.rank()).map(|r| ech.reduced.row(r).clone()).collect();
        Ok(Self { ambient_n: n, basis })
    }

    pub fn trivial(n: usize) -> Self {
        Self {
            ambient_n: n,
            basis: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            ambient_n: n,
            basis: (0..n).map(|i| Gf2Vector::unit(n, i)).collect(),
        }
    }

    /// `G = {Π gᵢ = 1}`, i.e. even-weight vectors.
    pub fn standard(n: usize) -> Result<Self, StandardActionError> {
        if n == 0 {
            return Err(StandardActionError::InvalidParameter("n must be at least 1".into()));
        }
        let gens: Vec<Gf2Vector> = (1..n)
            .map(|i| {
                let mut v = Gf2Vector::unit(n, i - 1);
                v.set(i, true);
                v
            })
            .collect();
        Self::from_generators(n, &gens)
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Gf2Vector] {
        &self.basis
    }

    pub fn order(&self) -> u128 {
        1u128 << self.basis.len()
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        let mut with = self.basis.clone();
        with.push(v.clone());
        span_rank(self.ambient_n, &with) == self.basis.len()
    }

    /// All elements, in the order of their coefficient masks.
    pub fn elements(&self) -> Vec<Gf2Vector> {
        all_vectors(self.basis.len())
            .map(|coeffs| {
                let mut v = Gf2Vector::zeros(self.ambient_n);
                for i in coeffs.ones_iter() {
                    v.add_assign(&self.basis[i]);
                }
                v
            })
            .collect()
    }

    /// `{v ∈ self : supp(v) ⊆ zero_set}`, the stabilizer of a point whose
    /// zero coordinates are exactly `zero_set`.
    pub fn stabilizer(&self, zero_set: &[usize]) -> Result<Self, StandardActionError> {
        let n = self.ambient_n;
        let mut inside = vec![false; n];
        for &c in zero_set {
            if c >= n {
                return Err(StandardActionError::CoordinateOutOfRange { coord: c, n });
            }
            inside[c] = true;
        }
        let outside: Vec<usize> = (0..n).filter(|&c| !inside[c]).collect();
        let basis = Gf2Matrix::from_rows(n, self.basis.clone()).expect("basis has width n");
        // x·B vanishes outside the zero set iff x is in the kernel of
        // (B restricted to those columns)ᵀ
        let coeffs = basis.select_cols(&outside).transpose().kernel_basis();
        let gens = coeffs
            .iter()
            .map(|x| basis.vec_mul(x).expect("coefficient length matches"))
            .collect::<Vec<_>>();
        Self::from_generators(n, &gens)
    }

    /// True iff the rotations in the subgroup (elements flipping exactly two
    /// signs) generate it.
    pub fn is_generated_by_rotations(&self) -> bool {
        let n = self.ambient_n;
        let mut rotations = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut v = Gf2Vector::unit(n, i);
                v.set(j, true);
                if self.contains(&v) {
                    rotations.push(v);
                }
            }
        }
        span_rank(n, &rotations) == self.basis.len()
    }
}

/// `(+1,−1,…)` rendering of a sign element.
pub fn sign_notation(v: &Gf2Vector) -> String {
    let mut s = String::from("(");
    for i in 0..v.len() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(if v.get(i) { "-1" } else { "1" });
    }
    s.push(')');
    s
}

/// `C(k,0) + C(k,2) + …`, the number of even subsets of a `k`-set. Equal to
/// `2^{k−1}` for `k ≥ 1`; `k = 0` gives 1 (the empty subset).
pub fn stabilizer_order_formula(k: u64) -> u64 {
    (0..=k).step_by(2).map(|j| binomial(k, j)).sum()
}

/// The homomorphism `φ(t) = (α₁(t), …, α_n(t))` from `Z₂^{n−1}` to `Z₂ⁿ`
/// built from tangent weights in general position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakEquivalence {
    /// `n × (n−1)`; row `i` is `αᵢ`.
    matrix: Gf2Matrix,
}

impl WeakEquivalence {
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, t: &Gf2Vector) -> Gf2Vector {
        self.matrix.mul_vec(t).expect("argument has length n - 1")
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.matrix.cols()
    }

    /// Image as a subgroup, generated by the images of the basis vectors.
    pub fn image(&self) -> SignSubgroup {
        let k = self.matrix.cols();
        let gens: Vec<Gf2Vector> = (0..k).map(|j| self.apply(&Gf2Vector::unit(k, j))).collect();
        SignSubgroup::from_generators(self.n(), &gens).expect("images have length n")
    }
}

/// Builds `φ` after checking that no weight is zero and that every `n − 1`
/// of them are independent.
pub fn weak_equivalence_iso(weights: &[Gf2Vector]) -> Result<WeakEquivalence, StandardActionError> {
    let n = weights.len();
    if n < 2 {
        return Err(StandardActionError::InvalidParameter(format!(
            "need at least 2 weights, got {n}"
        )));
    }
    if let Some(bad) = weights.iter().find(|w| w.len() != n - 1) {
        return Err(StandardActionError::LengthMismatch {
            expected: n - 1,
            found: bad.len(),
        });
    }
    if let Some(index) = weights.iter().position(Gf2Vector::is_zero) {
        return Err(StandardActionError::ZeroWeight { index });
    }
    for omitted in (0..n).rev() {
        let subset: Vec<usize> = (0..n).filter(|&i| i != omitted).collect();
        let vectors: Vec<Gf2Vector> = subset.iter().map(|&i| weights[i].clone()).collect();
        if span_rank(n - 1, &vectors) != n - 1 {
            return Err(StandardActionError::NotGeneralPosition { dependent: subset });
        }
    }
    Ok(WeakEquivalence {
        matrix: Gf2Matrix::from_rows(n - 1, weights.to_vec()).expect("lengths checked"),
    })
}

/// Boundary of the `n`-dimensional cross-polytope as a simplicial
/// `(n−1)`-sphere.
///
/// A simplex is a sign vector in `{−1, 0, 1}ⁿ`: its vertices are `sᵢ·eᵢ` for
/// the nonzero coordinates. It never contains both `eᵢ` and `−eᵢ`.
#[derive(Debug, Clone)]
pub struct CrossPolytopeSphere {
    pub complex: CellComplex,
    /// `simplices[d][k]` is the sign vector of `d`-cell `k`.
    pub simplices: Vec<Vec<Vec<i8>>>,
}

impl CrossPolytopeSphere {
    pub fn n(&self) -> usize {
        self.simplices
            .first()
            .and_then(|s| s.first())
            .map_or(0, Vec::len)
    }

    /// Cell permutations of the sign action of every element of `h`.
    pub fn action(&self, h: &SignSubgroup) -> Result<CellAction, StandardActionError> {
        let index: Vec<BTreeMap<&Vec<i8>, usize>> = self
            .simplices
            .iter()
            .map(|s| s.iter().enumerate().map(|(k, v)| (v, k)).collect())
            .collect();
        let elements = h
            .elements()
            .iter()
            .map(|g| {
                self.simplices
                    .iter()
                    .enumerate()
                    .map(|(d, cells)| {
                        cells
                            .iter()
                            .map(|s| index[d][&flip_signs(s, g)])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(CellAction::new(&self.complex, elements)?)
    }

    /// Whether every element that maps a simplex to itself fixes each of its
    /// vertices.
    pub fn sign_action_is_regular(&self, h: &SignSubgroup) -> bool {
        h.elements().iter().all(|g| {
            self.simplices.iter().flatten().all(|s| {
                let image = flip_signs(s, g);
                image != *s || s.iter().enumerate().all(|(i, &x)| x == 0 || !g.get(i))
            })
        })
    }
}

fn flip_signs(s: &[i8], g: &Gf2Vector) -> Vec<i8> {
    s.iter()
        .enumerate()
        .map(|(i, &x)| if g.get(i) { -x } else { x })
        .collect()
}

fn sign_label(s: &[i8]) -> String {
    s.iter()
        .map(|&x| match x {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

pub fn cross_polytope_sphere(n: usize) -> Result<CrossPolytopeSphere, StandardActionError> {
    if n == 0 || n > 10 {
        return Err(StandardActionError::InvalidParameter(format!(
            "cross-polytope needs 1 <= n <= 10, got {n}"
        )));
    }
    let mut simplices: Vec<Vec<Vec<i8>>> = vec![Vec::new(); n];
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut s = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            s.push(match c % 3 {
                0 => 0i8,
                1 => 1,
                _ => -1,
            });
            c /= 3;
        }
        let support = s.iter().filter(|&&x| x != 0).count();
        if support > 0 {
            simplices[support - 1].push(s);
        }
    }
    for cells in &mut simplices {
        cells.sort();
    }
    let index: Vec<BTreeMap<&Vec<i8>, usize>> = simplices
        .iter()
        .map(|s| s.iter().enumerate().map(|(k, v)| (v, k)).collect())
        .collect();
    let mut labels = Vec::with_capacity(n);
    let mut boundary = Vec::with_capacity(n);
    for (d, cells) in simplices.iter().enumerate() {
        labels.push(cells.iter().map(|s| sign_label(s)).collect());
        boundary.push(
            cells
                .iter()
                .map(|s| {
                    if d == 0 {
                        return Vec::new();
                    }
                    (0..n)
                        .filter(|&i| s[i] != 0)
                        .map(|i| {
                            let mut face = s.clone();
                            face[i] = 0;
                            index[d - 1][&face]
                        })
                        .collect()
                })
                .collect(),
        );
    }
    let complex = CellComplex::new(labels, boundary)?;
    Ok(CrossPolytopeSphere { complex, simplices })
}

/// Mod-2 Betti numbers of `S^{n−1}/H`, with `S^{n−1}` the boundary of the
/// cross-polytope and `H` acting by sign changes.
pub fn quotient_sphere_homology(n: usize, h: &SignSubgroup) -> Result<Vec<usize>, StandardActionError> {
    if h.ambient_n() != n {
        return Err(StandardActionError::LengthMismatch {
            expected: n,
            found: h.ambient_n(),
        });
    }
    let sphere = cross_polytope_sphere(n)?;
    let action = sphere.action(h)?;
    let (quotient, _) = quotient_with_subdivision_fallback(&sphere.complex, &action)?;
    Ok(quotient.complex.betti_mod2())
}

/// Mod-2 Betti numbers of the `d`-sphere.
pub fn sphere_betti(d: usize) -> Vec<usize> {
    if d == 0 {
        return vec![2];
    }
    let mut b = vec![0; d + 1];
    b[0] = 1;
    b[d] = 1;
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(v: &[Gf2Vector]) -> Vec<String> {
        let mut out: Vec<String> = v.iter().map(Gf2Vector::to_bit_string).collect();
        out.sort();
        out
    }

    #[test]
    fn standard_subgroups() {
        assert_eq!(bits(&SignSubgroup::standard(2).unwrap().elements()), ["00", "11"]);
        assert_eq!(
            bits(&SignSubgroup::standard(3).unwrap().elements()),
            ["000", "011", "101", "110"]
        );
        assert_eq!(SignSubgroup::standard(1).unwrap().order(), 1);
        for n in 1..=8 {
            let g = SignSubgroup::standard(n).unwrap();
            assert_eq!(g.order(), 1 << (n - 1));
            assert!(g.elements().iter().all(|e| e.weight() % 2 == 0));
        }
    }

    #[test]
    fn stabilizers() {
        let g = SignSubgroup::standard(4).unwrap();
        let h = g.stabilizer(&[0, 1, 2]).unwrap();
        assert_eq!(h.order(), 4);
        assert_eq!(bits(&h.elements()), ["0000", "0110", "1010", "1100"]);
        assert_eq!(g.stabilizer(&[2]).unwrap().order(), 1);
        assert_eq!(g.stabilizer(&[]).unwrap().order(), 1);
        assert_eq!(g.stabilizer(&[0, 1, 2, 3]).unwrap(), g);
        assert!(matches!(
            g.stabilizer(&[4]),
            Err(StandardActionError::CoordinateOutOfRange { coord: 4, n: 4 })
        ));
    }

    #[test]
    fn order_formula() {
        assert_eq!(stabilizer_order_formula(3), 4);
        assert_eq!(stabilizer_order_formula(2), 2);
        assert_eq!(stabilizer_order_formula(10), 512);
        assert_eq!(stabilizer_order_formula(0), 1);
    }

    #[test]
    fn rotations() {
        let g = SignSubgroup::standard(5).unwrap();
        assert!(g.stabilizer(&[1, 3]).unwrap().is_generated_by_rotations());
        let diag = SignSubgroup::from_generators(4, &[Gf2Vector::ones(4)]).unwrap();
        assert!(!diag.is_generated_by_rotations());
        assert!(SignSubgroup::trivial(3).is_generated_by_rotations());
    }

    #[test]
    fn weak_equivalence_examples() {
        let w: Vec<Gf2Vector> = ["10", "01", "11"].iter().map(|s| Gf2Vector::parse(s).unwrap()).collect();
        let phi = weak_equivalence_iso(&w).unwrap();
        assert!(phi.is_injective());
        let image: Vec<Gf2Vector> = all_vectors(2).map(|t| phi.apply(&t)).collect();
        assert_eq!(bits(&image), ["000", "011", "101", "110"]);
        assert_eq!(phi.image(), SignSubgroup::standard(3).unwrap());

        let zero: Vec<Gf2Vector> = ["10", "00", "11"].iter().map(|s| Gf2Vector::parse(s).unwrap()).collect();
        assert_eq!(
            weak_equivalence_iso(&zero),
            Err(StandardActionError::ZeroWeight { index: 1 })
        );
        let same = [Gf2Vector::parse("1").unwrap(), Gf2Vector::parse("1").unwrap()];
        assert!(weak_equivalence_iso(&same).is_ok());
        let dep: Vec<Gf2Vector> = ["10", "10", "01"].iter().map(|s| Gf2Vector::parse(s).unwrap()).collect();
        assert!(matches!(
            weak_equivalence_iso(&dep),
            Err(StandardActionError::NotGeneralPosition { .. })
        ));
    }

    #[test]
    fn cross_polytope_counts() {
        let s = cross_polytope_sphere(3).unwrap();
        assert_eq!(s.complex.cell_counts(), [6, 12, 8]);
        assert_eq!(s.complex.betti_mod2(), [1, 0, 1]);
        assert_eq!(cross_polytope_sphere(1).unwrap().complex.betti_mod2(), [2]);
    }

    #[test]
    fn sphere_quotients() {
        let g2 = SignSubgroup::standard(2).unwrap();
        assert_eq!(quotient_sphere_homology(2, &g2).unwrap(), [1, 1]);
        let g3 = SignSubgroup::standard(3).unwrap();
        assert_eq!(quotient_sphere_homology(3, &g3).unwrap(), [1, 0, 1]);
        for n in 1..=4 {
            assert_eq!(
                quotient_sphere_homology(n, &SignSubgroup::trivial(n)).unwrap(),
                sphere_betti(n - 1)
            );
        }
        let diag = SignSubgroup::from_generators(4, &[Gf2Vector::ones(4)]).unwrap();
        assert_eq!(quotient_sphere_homology(4, &diag).unwrap(), [1, 1, 1, 1]);
    }

    #[test]
    fn sign_action_regularity() {
        for n in 1..=5 {
            let s = cross_polytope_sphere(n).unwrap();
            assert!(s.sign_action_is_regular(&SignSubgroup::full(n)));
        }
    }
}
