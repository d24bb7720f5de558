//! Characteristic functions and the index-two subgroup in general position.
//!
//! A characteristic function assigns `λᵢ ∈ Z₂ⁿ` to facet `i`. The independence
//! condition is checked at vertices only: every face's facet set extends to
//! the facet set of one of its vertices, and subsets of independent sets are
//! independent.
//!
//! An index-two subgroup is `G = Ker ξ` for a nonzero functional `ξ`. It is in
//! general position iff `ξ(λᵢ) = 1` for every facet; [`direct_general_position`]
//! checks the same property from the tangent weights instead.

use alloc::vec::Vec;
use core::fmt;

use crate::gf2::{all_vectors, span_rank, Gf2Error, Gf2Matrix, Gf2Vector};
use crate::polytope::SimplePolytope;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharError {
    ShapeMismatch {
        facets: usize,
        rows: usize,
        dim: usize,
        cols: usize,
    },
    /// The λ-rows at `vertex` (through `facets`) are dependent.
    StarFails { vertex: usize, facets: Vec<usize> },
    VertexOutOfRange { vertex: usize, vertices: usize },
    NotGeneralPosition { facet: usize },
    ZeroFunctional,
    Linear(Gf2Error),
}

impl fmt::Display for CharError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharError::ShapeMismatch {
                facets,
                rows,
                dim,
                cols,
            } => write!(
                f,
                "characteristic matrix is {rows}x{cols}, polytope needs {facets}x{dim}"
            ),
            CharError::StarFails { vertex, facets } => write!(
                f,
                "independence fails at vertex {vertex}: λ-rows of facets {facets:?} are dependent"
            ),
            CharError::VertexOutOfRange { vertex, vertices } => {
                write!(f, "vertex {vertex} out of range ({vertices} vertices)")
            }
            CharError::NotGeneralPosition { facet } => {
                write!(f, "subgroup not in general position: λ of facet {facet} lies in it")
            }
            CharError::ZeroFunctional => f.write_str("defining functional is zero"),
            CharError::Linear(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CharError {}

impl From<Gf2Error> for CharError {
    fn from(e: Gf2Error) -> Self {
        CharError::Linear(e)
    }
}

/// Row `i` is `λᵢ`; the matrix is `m × n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicFunction {
    lambda: Gf2Matrix,
}

impl CharacteristicFunction {
    pub fn new(lambda: Gf2Matrix) -> Self {
        Self { lambda }
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.lambda
    }

    pub fn row(&self, facet: usize) -> &Gf2Vector {
        self.lambda.row(facet)
    }

    pub fn rank_n(&self) -> usize {
        self.lambda.cols()
    }

    pub fn facets(&self) -> usize {
        self.lambda.rows()
    }

    fn check_shape(&self, p: &SimplePolytope) -> Result<(), CharError> {
        if self.lambda.rows() != p.facet_count() || self.lambda.cols() != p.dim() {
            return Err(CharError::ShapeMismatch {
                facets: p.facet_count(),
                rows: self.lambda.rows(),
                dim: p.dim(),
                cols: self.lambda.cols(),
            });
        }
        Ok(())
    }

    /// λ-rows of the facets through `vertex`, as an `n × n` matrix.
    pub fn vertex_matrix(&self, p: &SimplePolytope, vertex: usize) -> Gf2Matrix {
        self.lambda.select_rows(p.vertex_facets(vertex))
    }
}

/// Checks that the λ-rows at every vertex are a basis of `Z₂ⁿ`.
pub fn check_star(p: &SimplePolytope, lambda: &CharacteristicFunction) -> Result<(), CharError> {
    lambda.check_shape(p)?;
    for v in 0..p.vertex_count() {
        if lambda.vertex_matrix(p, v).rank() != p.dim() {
            return Err(CharError::StarFails {
                vertex: v,
                facets: p.vertex_facets(v).to_vec(),
            });
        }
    }
    Ok(())
}

/// The weights of the tangent representation at a fixed point: the basis of
/// `(Z₂ⁿ)*` dual to the λ-rows at the vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentWeights {
    pub vertex: usize,
    /// Facets through the vertex; `weights[k]` is dual to `λ` of `facets[k]`.
    pub facets: Vec<usize>,
    pub weights: Vec<Gf2Vector>,
}

impl TangentWeights {
    /// Matrix of pairings `weights[j](λ_{facets[k]})`.
    pub fn pairing(&self, lambda: &CharacteristicFunction) -> Gf2Matrix {
        let n = self.weights.len();
        let mut out = Gf2Matrix::zeros(n, n);
        for (j, w) in self.weights.iter().enumerate() {
            for (k, &facet) in self.facets.iter().enumerate() {
                out.set(j, k, w.dot(lambda.row(facet)));
            }
        }
        out
    }
}

pub fn tangent_weights(
    p: &SimplePolytope,
    lambda: &CharacteristicFunction,
    vertex: usize,
) -> Result<TangentWeights, CharError> {
    lambda.check_shape(p)?;
    if vertex >= p.vertex_count() {
        return Err(CharError::VertexOutOfRange {
            vertex,
            vertices: p.vertex_count(),
        });
    }
    let facets = p.vertex_facets(vertex).to_vec();
    let basis = lambda.vertex_matrix(p, vertex);
    // W·Lᵀ = I, so W = (Lᵀ)⁻¹.
    let inverse = basis
        .transpose()
        .inverse()
        .ok_or_else(|| CharError::StarFails {
            vertex,
            facets: facets.clone(),
        })?;
    Ok(TangentWeights {
        vertex,
        facets,
        weights: inverse.row_vectors().to_vec(),
    })
}

/// An index-two subgroup `Ker ξ ⊂ Z₂ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subtorus {
    xi: Gf2Vector,
    basis: Vec<Gf2Vector>,
}

impl Subtorus {
    pub fn from_functional(xi: Gf2Vector) -> Result<Self, CharError> {
        if xi.is_zero() {
            return Err(CharError::ZeroFunctional);
        }
        let n = xi.len();
        let basis = Gf2Matrix::from_rows(n, alloc::vec![xi.clone()])?.kernel_basis();
        Ok(Self { xi, basis })
    }

    pub fn xi(&self) -> &Gf2Vector {
        &self.xi
    }

    /// `n − 1` independent vectors spanning the subgroup.
    pub fn basis(&self) -> &[Gf2Vector] {
        &self.basis
    }

    pub fn ambient_rank(&self) -> usize {
        self.xi.len()
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        !self.xi.dot(v)
    }

    /// All `2^{n−1}` elements; intended for small `n`.
    pub fn elements(&self) -> Vec<Gf2Vector> {
        let k = self.basis.len();
        all_vectors(k)
            .map(|coeffs| {
                let mut v = Gf2Vector::zeros(self.xi.len());
                for i in coeffs.ones_iter() {
                    v.add_assign(&self.basis[i]);
                }
                v
            })
            .collect()
    }
}

/// Outcome of solving `Λ·ξ = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientability {
    pub subtorus: Subtorus,
    /// True iff `Λ` has full column rank, so that `ξ` is the only solution.
    pub unique: bool,
}

/// Finds `ξ` with `ξ(λᵢ) = 1` for all facets. `None` means the small cover
/// is non-orientable and no subgroup is in general position.
pub fn orientability_functional(
    lambda: &CharacteristicFunction,
) -> Result<Option<Orientability>, CharError> {
    let m = lambda.facets();
    let Some((xi, unique)) = lambda.matrix().solve_affine(&Gf2Vector::ones(m))? else {
        return Ok(None);
    };
    if xi.is_zero() {
        // only possible with no facets at all
        return Ok(None);
    }
    Ok(Some(Orientability {
        subtorus: Subtorus::from_functional(xi)?,
        unique,
    }))
}

/// Every nonzero `ξ` with `ξ(λᵢ) = 1` for all `i`, by exhaustive search.
pub fn enumerate_general_position_functionals(lambda: &CharacteristicFunction) -> Vec<Gf2Vector> {
    let n = lambda.rank_n();
    assert!(n <= 20, "exhaustive functional search limited to n <= 20");
    all_vectors(n)
        .filter(|xi| !xi.is_zero())
        .filter(|xi| lambda.matrix().row_vectors().iter().all(|l| xi.dot(l)))
        .collect()
}

/// Whether the general-position functional is unique: exhaustive search for
/// `n ≤ 20`, triviality of `Ker Λ` beyond that.
pub fn general_position_functional_is_unique(lambda: &CharacteristicFunction) -> bool {
    if lambda.rank_n() <= 20 {
        enumerate_general_position_functionals(lambda).len() == 1
    } else {
        lambda.matrix().rank() == lambda.rank_n()
            && orientability_functional(lambda).ok().flatten().is_some()
    }
}

/// `G = Ker ξ` is in general position iff `ξ(λᵢ) = 1` for every facet.
pub fn is_general_position(lambda: &CharacteristicFunction, g: &Subtorus) -> bool {
    first_facet_in_subgroup(lambda, g).is_none()
}

fn first_facet_in_subgroup(lambda: &CharacteristicFunction, g: &Subtorus) -> Option<usize> {
    (0..lambda.facets()).find(|&i| !g.xi().dot(lambda.row(i)))
}

/// General position read off the tangent weights: at each vertex, any
/// `n − 1` of the weights stay independent after restriction to `G`.
///
/// Restriction to `G` is the quotient `(Z₂ⁿ)*/⟨ξ⟩`, and a set `S` is
/// independent there iff `rank(S ∪ {ξ}) = |S| + 1`.
pub fn direct_general_position(
    p: &SimplePolytope,
    lambda: &CharacteristicFunction,
    g: &Subtorus,
) -> Result<bool, CharError> {
    let n = p.dim();
    for v in 0..p.vertex_count() {
        let tw = tangent_weights(p, lambda, v)?;
        for omitted in 0..n {
            let mut set: Vec<Gf2Vector> = tw
                .weights
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != omitted)
                .map(|(_, w)| w.clone())
                .collect();
            set.push(g.xi().clone());
            if span_rank(n, &set) != n {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `G` written in the λ-basis at one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub vertex: usize,
    /// Rows are the λ-vectors at the vertex, i.e. the new generators.
    pub lambda_basis: Gf2Matrix,
    /// Basis of `G` in λ-coordinates.
    pub subgroup_coords: Vec<Gf2Vector>,
    /// True iff `G` is exactly the coordinate-sum-zero subspace (the
    /// even-sign subgroup `{Π gᵢ = 1}` in multiplicative notation).
    pub is_even_sign_subgroup: bool,
}

pub fn canonical_form_at_vertex(
    p: &SimplePolytope,
    lambda: &CharacteristicFunction,
    vertex: usize,
    g: &Subtorus,
) -> Result<CanonicalForm, CharError> {
    check_star(p, lambda)?;
    if vertex >= p.vertex_count() {
        return Err(CharError::VertexOutOfRange {
            vertex,
            vertices: p.vertex_count(),
        });
    }
    if let Some(facet) = first_facet_in_subgroup(lambda, g) {
        return Err(CharError::NotGeneralPosition { facet });
    }
    let n = p.dim();
    let basis = lambda.vertex_matrix(p, vertex);
    // g = c·L, so c = g·L⁻¹.
    let inverse = basis.inverse().expect("independence checked above");
    let coords = g
        .basis()
        .iter()
        .map(|b| inverse.vec_mul(b))
        .collect::<Result<Vec<_>, _>>()?;
    let even = coords.iter().all(|c| c.weight() % 2 == 0) && span_rank(n, &coords) + 1 == n;
    Ok(CanonicalForm {
        vertex,
        lambda_basis: basis,
        subgroup_coords: coords,
        is_even_sign_subgroup: even,
    })
}

/// For every proper face, the stabilizer `⟨λ-rows of the face⟩` is not
/// contained in `G`; checked by comparing ranks.
pub fn stabilizers_escape(
    p: &SimplePolytope,
    lambda: &CharacteristicFunction,
    g: &Subtorus,
) -> bool {
    let n = p.dim();
    let lattice = p.enumerate_faces();
    lattice.faces().iter().filter(|f| !f.facets.is_empty()).all(|face| {
        let mut span: Vec<Gf2Vector> = g.basis().to_vec();
        span.extend(face.facets.iter().map(|&j| lambda.row(j).clone()));
        span_rank(n, &span) > n - 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cf(n: usize, rows: &[&str]) -> CharacteristicFunction {
        CharacteristicFunction::new(Gf2Matrix::parse_rows(n, rows).unwrap())
    }

    fn rp(n: usize) -> (SimplePolytope, CharacteristicFunction) {
        let mut rows: Vec<Gf2Vector> = (0..n).map(|i| Gf2Vector::unit(n, i)).collect();
        rows.push(Gf2Vector::ones(n));
        (
            SimplePolytope::simplex(n).unwrap(),
            CharacteristicFunction::new(Gf2Matrix::from_rows(n, rows).unwrap()),
        )
    }

    fn torus(n: usize) -> (SimplePolytope, CharacteristicFunction) {
        let rows = (0..2 * n).map(|j| Gf2Vector::unit(n, j / 2)).collect();
        (
            SimplePolytope::cube(n).unwrap(),
            CharacteristicFunction::new(Gf2Matrix::from_rows(n, rows).unwrap()),
        )
    }

    #[test]
    fn star_condition() {
        let tri = SimplePolytope::simplex(2).unwrap();
        assert!(check_star(&tri, &cf(2, &["10", "01", "11"])).is_ok());
        // vertex 1 lies on facets 0 and 2
        assert_eq!(
            check_star(&tri, &cf(2, &["10", "01", "10"])),
            Err(CharError::StarFails {
                vertex: 1,
                facets: vec![0, 2]
            })
        );
        let (cube, t3) = torus(3);
        assert!(check_star(&cube, &t3).is_ok());
        assert!(matches!(
            check_star(&cube, &cf(2, &["10", "01"])),
            Err(CharError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn tangent_weight_examples() {
        let (cube, t3) = torus(3);
        let tw = tangent_weights(&cube, &t3, 0).unwrap();
        assert_eq!(tw.weights, Gf2Matrix::identity(3).row_vectors());

        // vertex 1 of the triangle lies on facets 0 and 2; give them e₁, e₁+e₂
        let tri = SimplePolytope::simplex(2).unwrap();
        let lam = cf(2, &["10", "01", "11"]);
        let tw = tangent_weights(&tri, &lam, 1).unwrap();
        assert_eq!(tw.facets, [0, 2]);
        assert_eq!(tw.weights[0].to_bit_string(), "11");
        assert_eq!(tw.weights[1].to_bit_string(), "01");
        assert_eq!(tw.pairing(&lam), Gf2Matrix::identity(2));
        assert!(matches!(
            tangent_weights(&tri, &lam, 7),
            Err(CharError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn orientability_examples() {
        let (_, rp2) = rp(2);
        assert_eq!(orientability_functional(&rp2).unwrap(), None);
        let (_, rp3) = rp(3);
        let o = orientability_functional(&rp3).unwrap().unwrap();
        assert_eq!(o.subtorus.xi().to_bit_string(), "111");
        assert!(o.unique);
        for n in 1..=4 {
            let (_, t) = torus(n);
            let o = orientability_functional(&t).unwrap().unwrap();
            assert_eq!(*o.subtorus.xi(), Gf2Vector::ones(n));
            assert_eq!(enumerate_general_position_functionals(&t), vec![Gf2Vector::ones(n)]);
        }
    }

    #[test]
    fn real_projective_parity() {
        for n in 1..=6 {
            let (_, lam) = rp(n);
            let orientable = orientability_functional(&lam).unwrap().is_some();
            assert_eq!(orientable, n % 2 == 1, "RP^{n}");
        }
    }

    #[test]
    fn general_position_square() {
        let (sq, t2) = torus(2);
        let good = Subtorus::from_functional(Gf2Vector::parse("11").unwrap()).unwrap();
        let bad = Subtorus::from_functional(Gf2Vector::parse("10").unwrap()).unwrap();
        assert!(is_general_position(&t2, &good));
        assert!(direct_general_position(&sq, &t2, &good).unwrap());
        assert!(!is_general_position(&t2, &bad));
        assert!(!direct_general_position(&sq, &t2, &bad).unwrap());
        assert!(stabilizers_escape(&sq, &t2, &good));
        assert!(!stabilizers_escape(&sq, &t2, &bad));
    }

    #[test]
    fn rp2_has_no_general_position_subgroup() {
        let (tri, lam) = rp(2);
        for xi in all_vectors(2).filter(|v| !v.is_zero()) {
            let g = Subtorus::from_functional(xi).unwrap();
            assert!(!direct_general_position(&tri, &lam, &g).unwrap());
            assert!(!is_general_position(&lam, &g));
        }
    }

    #[test]
    fn segment_is_vacuously_general() {
        let (seg, lam) = torus(1);
        let g = Subtorus::from_functional(Gf2Vector::ones(1)).unwrap();
        assert!(g.basis().is_empty());
        assert!(direct_general_position(&seg, &lam, &g).unwrap());
        assert!(is_general_position(&lam, &g));
    }

    #[test]
    fn canonical_forms() {
        let (sq, t2) = torus(2);
        let g = Subtorus::from_functional(Gf2Vector::ones(2)).unwrap();
        let cf0 = canonical_form_at_vertex(&sq, &t2, 0, &g).unwrap();
        assert!(cf0.is_even_sign_subgroup);
        assert_eq!(cf0.lambda_basis, Gf2Matrix::identity(2));
        let mut elems: Vec<_> = g.elements().iter().map(|e| e.to_bit_string()).collect();
        elems.sort();
        assert_eq!(elems, ["00", "11"]);

        let (tet, rp3) = rp(3);
        let g = Subtorus::from_functional(Gf2Vector::ones(3)).unwrap();
        for v in 0..4 {
            let c = canonical_form_at_vertex(&tet, &rp3, v, &g).unwrap();
            assert!(c.is_even_sign_subgroup);
        }
        assert_eq!(g.elements().len(), 4);

        let bad = Subtorus::from_functional(Gf2Vector::parse("10").unwrap()).unwrap();
        assert!(matches!(
            canonical_form_at_vertex(&sq, &t2, 0, &bad),
            Err(CharError::NotGeneralPosition { .. })
        ));
    }
}
