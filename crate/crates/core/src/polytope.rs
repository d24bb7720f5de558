//! Simple polytopes given by vertex–facet incidence.
//!
//! Only the face structure is stored: each vertex is the sorted list of the
//! facets containing it. Coordinates never appear. Validation checks
//! simplicity and that the facet-intersection poset is graded like the face
//! lattice of a simple polytope; it cannot decide whether an arbitrary
//! incidence table is realised by a convex polytope. The bundled generators
//! all produce genuine polytopes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gf2::Gf2Vector;

/// Note attached to every successful validation.
pub const POLYTOPALITY_NOTE: &str =
    "incidence is simple and graded; realisability as a convex polytope is not checked";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    InvalidParameter(String),
    NoVertices,
    FacetIndexOutOfRange { vertex: usize, facet: usize, facets: usize },
    RepeatedFacet { vertex: usize, facet: usize },
    NotSimple { vertex: usize, degree: usize, dim: usize },
    DuplicateVertex { first: usize, second: usize },
    EmptyFacet { facet: usize },
    TooFewFacets { facets: usize, dim: usize },
    /// The facets `facets` at `vertex` do not cut out a face of the expected
    /// codimension.
    NotGraded { vertex: usize, facets: Vec<usize> },
    /// A one-dimensional face with other than two vertices.
    BadEdge { facets: Vec<usize>, vertices: usize },
}

impl fmt::Display for PolytopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolytopeError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            PolytopeError::NoVertices => f.write_str("polytope has no vertices"),
            PolytopeError::FacetIndexOutOfRange {
                vertex,
                facet,
                facets,
            } => write!(
                f,
                "vertex {vertex}: facet index {facet} out of range (facet count {facets})"
            ),
            PolytopeError::RepeatedFacet { vertex, facet } => {
                write!(f, "vertex {vertex}: facet {facet} listed twice")
            }
            PolytopeError::NotSimple { vertex, degree, dim } => write!(
                f,
                "not simple: vertex {vertex} lies in {degree} facets, expected {dim}"
            ),
            PolytopeError::DuplicateVertex { first, second } => {
                write!(f, "vertices {first} and {second} have the same facet set")
            }
            PolytopeError::EmptyFacet { facet } => write!(f, "facet {facet} contains no vertex"),
            PolytopeError::TooFewFacets { facets, dim } => write!(
                f,
                "a {dim}-polytope needs at least {} facets, got {facets}",
                dim + 1
            ),
            PolytopeError::NotGraded { vertex, facets } => write!(
                f,
                "not graded: facets {facets:?} at vertex {vertex} do not cut out a face of codimension {}",
                facets.len()
            ),
            PolytopeError::BadEdge { facets, vertices } => write!(
                f,
                "edge cut out by facets {facets:?} has {vertices} vertices, expected 2"
            ),
        }
    }
}

impl core::error::Error for PolytopeError {}

/// Summary returned by a successful [`SimplePolytope::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub dim: usize,
    pub facets: usize,
    pub vertices: usize,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplePolytope {
    dim: usize,
    facet_count: usize,
    /// Sorted facet indices per vertex.
    vertices: Vec<Vec<usize>>,
}

/// A nonempty face, identified by its vertex set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    pub dim: usize,
    /// All facets containing the face (sorted); empty for the whole polytope.
    pub facets: Vec<usize>,
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
}

impl Face {
    pub fn codim(&self) -> usize {
        self.facets.len()
    }

    /// `{0,2}`-style name used in cell labels.
    pub fn label(&self) -> String {
        let mut s = String::from("{");
        for (k, j) in self.facets.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(&format!("{j}"));
        }
        s.push('}');
        s
    }
}

impl SimplePolytope {
    /// Stores an incidence table without validating it. Facet lists are
    /// sorted; call [`SimplePolytope::validate`] before using the result.
    pub fn from_incidence(dim: usize, facet_count: usize, vertices: Vec<Vec<usize>>) -> Self {
        let vertices = vertices
            .into_iter()
            .map(|mut v| {
                v.sort_unstable();
                v
            })
            .collect();
        Self {
            dim,
            facet_count,
            vertices,
        }
    }

    /// Like [`SimplePolytope::from_incidence`] but validated.
    pub fn new(
        dim: usize,
        facet_count: usize,
        vertices: Vec<Vec<usize>>,
    ) -> Result<Self, PolytopeError> {
        let p = Self::from_incidence(dim, facet_count, vertices);
        p.validate()?;
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facet_count(&self) -> usize {
        self.facet_count
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Sorted facets through vertex `v`.
    pub fn vertex_facets(&self, v: usize) -> &[usize] {
        &self.vertices[v]
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    fn facet_mask(&self, facets: &[usize]) -> Gf2Vector {
        let mut mask = Gf2Vector::zeros(self.facet_count);
        for &j in facets {
            mask.set(j, true);
        }
        mask
    }

    /// Vertices lying on every facet of `facets`.
    fn vertices_on(&self, masks: &[Gf2Vector], facets: &Gf2Vector) -> Vec<usize> {
        masks
            .iter()
            .enumerate()
            .filter(|(_, m)| facets.is_subset_of(m))
            .map(|(v, _)| v)
            .collect()
    }

    /// Facets containing every vertex of `vertices`.
    fn facets_through(&self, masks: &[Gf2Vector], vertices: &[usize]) -> Gf2Vector {
        let mut acc = Gf2Vector::ones(self.facet_count);
        for &v in vertices {
            acc = acc.and(&masks[v]);
        }
        acc
    }

    /// Checks simplicity and gradedness, reporting the first violation.
    pub fn validate(&self) -> Result<ValidationReport, PolytopeError> {
        let n = self.dim;
        let m = self.facet_count;
        if self.vertices.is_empty() {
            return Err(PolytopeError::NoVertices);
        }
        for (v, facets) in self.vertices.iter().enumerate() {
            if let Some(&bad) = facets.iter().find(|&&j| j >= m) {
                return Err(PolytopeError::FacetIndexOutOfRange {
                    vertex: v,
                    facet: bad,
                    facets: m,
                });
            }
            if let Some(w) = facets.windows(2).find(|w| w[0] == w[1]) {
                return Err(PolytopeError::RepeatedFacet {
                    vertex: v,
                    facet: w[0],
                });
            }
            if facets.len() != n {
                return Err(PolytopeError::NotSimple {
                    vertex: v,
                    degree: facets.len(),
                    dim: n,
                });
            }
        }
        let mut seen: BTreeMap<&[usize], usize> = BTreeMap::new();
        for (v, facets) in self.vertices.iter().enumerate() {
            if let Some(&first) = seen.get(facets.as_slice()) {
                return Err(PolytopeError::DuplicateVertex { first, second: v });
            }
            seen.insert(facets, v);
        }
        if n >= 1 && m < n + 1 {
            return Err(PolytopeError::TooFewFacets { facets: m, dim: n });
        }
        let masks: Vec<Gf2Vector> = self.vertices.iter().map(|f| self.facet_mask(f)).collect();
        for j in 0..m {
            if !masks.iter().any(|mask| mask.get(j)) {
                return Err(PolytopeError::EmptyFacet { facet: j });
            }
        }
        // Around each vertex the faces must form a Boolean lattice: every
        // subset T of the n facets at the vertex cuts out a face whose full
        // facet set is exactly T.
        for (v, facets) in self.vertices.iter().enumerate() {
            for subset in 0u64..(1u64 << n) {
                let chosen: Vec<usize> = (0..n)
                    .filter(|k| subset >> k & 1 == 1)
                    .map(|k| facets[k])
                    .collect();
                let verts = self.vertices_on(&masks, &self.facet_mask(&chosen));
                let through = self.facets_through(&masks, &verts);
                if through != self.facet_mask(&chosen) {
                    return Err(PolytopeError::NotGraded {
                        vertex: v,
                        facets: chosen,
                    });
                }
                if chosen.len() + 1 == n && verts.len() != 2 {
                    return Err(PolytopeError::BadEdge {
                        facets: chosen,
                        vertices: verts.len(),
                    });
                }
            }
        }
        Ok(ValidationReport {
            dim: n,
            facets: m,
            vertices: self.vertices.len(),
            note: POLYTOPALITY_NOTE,
        })
    }

    /// All nonempty faces, graded by dimension. Assumes a validated polytope.
    pub fn enumerate_faces(&self) -> FaceLattice {
        let n = self.dim;
        let masks: Vec<Gf2Vector> = self.vertices.iter().map(|f| self.facet_mask(f)).collect();
        let mut by_vertices: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for facets in &self.vertices {
            for subset in 0u64..(1u64 << n) {
                let chosen: Vec<usize> = (0..n)
                    .filter(|k| subset >> k & 1 == 1)
                    .map(|k| facets[k])
                    .collect();
                let verts = self.vertices_on(&masks, &self.facet_mask(&chosen));
                if by_vertices.contains_key(&verts) {
                    continue;
                }
                let through: Vec<usize> = self.facets_through(&masks, &verts).ones_iter().collect();
                by_vertices.insert(verts, through);
            }
        }
        let mut faces: Vec<Face> = by_vertices
            .into_iter()
            .map(|(vertices, facets)| Face {
                dim: n - facets.len(),
                facets,
                vertices,
            })
            .collect();
        faces.sort();
        FaceLattice::new(n, faces)
    }

    pub fn f_vector(&self) -> Vec<u64> {
        let lattice = self.enumerate_faces();
        (0..self.dim)
            .map(|d| lattice.of_dim(d).count() as u64)
            .collect()
    }

    /// h-vector from `Σ hᵢ t^{n−i} = Σ_{i=0}^{n} f_{i−1} (t−1)^{n−i}`.
    pub fn h_vector(&self) -> Vec<i64> {
        h_vector_from_f(&self.f_vector())
    }

    /// The face `face` as a simple polytope in its own right.
    ///
    /// Facets of the result are the codimension-one faces of `face`, listed by
    /// the original facet cutting them out; the returned maps send new facet
    /// and vertex indices to original ones.
    pub fn face_polytope(&self, face: &Face) -> FacePolytope {
        let masks: Vec<Gf2Vector> = self.vertices.iter().map(|f| self.facet_mask(f)).collect();
        let mut facet_map = Vec::new();
        for j in 0..self.facet_count {
            if face.facets.contains(&j) {
                continue;
            }
            let mut with = face.facets.clone();
            with.push(j);
            let verts = self.vertices_on(&masks, &self.facet_mask(&with));
            if !verts.is_empty() {
                facet_map.push(j);
            }
        }
        let incidence = face
            .vertices
            .iter()
            .map(|&v| {
                self.vertices[v]
                    .iter()
                    .filter_map(|j| facet_map.iter().position(|x| x == j))
                    .collect()
            })
            .collect();
        FacePolytope {
            polytope: Self::from_incidence(face.dim, facet_map.len(), incidence),
            facet_map,
            vertex_map: face.vertices.clone(),
        }
    }

    // ---- generators ----

    /// The `n`-simplex: vertex `j` lies on every facet except facet `j`.
    pub fn simplex(n: usize) -> Result<Self, PolytopeError> {
        if n == 0 {
            return Err(PolytopeError::InvalidParameter("simplex needs n >= 1".into()));
        }
        let vertices = (0..=n)
            .map(|v| (0..=n).filter(|&j| j != v).collect())
            .collect();
        Self::new(n, n + 1, vertices)
    }

    /// The `n`-cube. Facets `2i` and `2i+1` are `xᵢ = 0` and `xᵢ = 1`;
    /// vertex `b` (as a bit mask) lies on facet `2i + bᵢ`.
    pub fn cube(n: usize) -> Result<Self, PolytopeError> {
        if n == 0 || n > 20 {
            return Err(PolytopeError::InvalidParameter(format!(
                "cube needs 1 <= n <= 20, got {n}"
            )));
        }
        let vertices = (0..(1usize << n))
            .map(|b| (0..n).map(|i| 2 * i + (b >> i & 1)).collect())
            .collect();
        Self::new(n, 2 * n, vertices)
    }

    /// The `m`-gon. Edge `i` joins vertices `i` and `i+1 mod m`.
    pub fn polygon(m: usize) -> Result<Self, PolytopeError> {
        if m < 3 {
            return Err(PolytopeError::InvalidParameter(format!(
                "polygon needs m >= 3, got {m}"
            )));
        }
        let vertices = (0..m).map(|v| vec![(v + m - 1) % m, v]).collect();
        Self::new(2, m, vertices)
    }

    /// Cartesian product; facets of `self` come first, then those of `other`
    /// shifted by `self.facet_count()`. Vertices are pairs in row-major order.
    pub fn product(&self, other: &Self) -> Result<Self, PolytopeError> {
        let shift = self.facet_count;
        let mut vertices = Vec::with_capacity(self.vertex_count() * other.vertex_count());
        for a in &self.vertices {
            for b in &other.vertices {
                let mut f = a.clone();
                f.extend(b.iter().map(|j| j + shift));
                vertices.push(f);
            }
        }
        Self::new(
            self.dim + other.dim,
            self.facet_count + other.facet_count,
            vertices,
        )
    }

    /// Whether some relabelling of facets and vertices carries one incidence
    /// table onto the other.
    pub fn is_combinatorially_equivalent(&self, other: &Self) -> bool {
        if self.dim != other.dim
            || self.facet_count != other.facet_count
            || self.vertex_count() != other.vertex_count()
        {
            return false;
        }
        let target: BTreeMap<Vec<usize>, ()> =
            other.vertices.iter().map(|v| (v.clone(), ())).collect();
        let mut assignment = vec![usize::MAX; self.facet_count];
        let mut used = vec![false; other.facet_count];
        self.extend_facet_map(0, &mut assignment, &mut used, other, &target)
    }

    fn extend_facet_map(
        &self,
        next: usize,
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
        other: &Self,
        target: &BTreeMap<Vec<usize>, ()>,
    ) -> bool {
        if next == self.facet_count {
            return self.vertices.iter().all(|v| {
                let mut image: Vec<usize> = v.iter().map(|&j| assignment[j]).collect();
                image.sort_unstable();
                target.contains_key(&image)
            });
        }
        let degree = |p: &Self, j: usize| p.vertices.iter().filter(|v| v.contains(&j)).count();
        let want = degree(self, next);
        for candidate in 0..other.facet_count {
            if used[candidate] || degree(other, candidate) != want {
                continue;
            }
            assignment[next] = candidate;
            used[candidate] = true;
            if self.extend_facet_map(next + 1, assignment, used, other, target) {
                return true;
            }
            used[candidate] = false;
        }
        assignment[next] = usize::MAX;
        false
    }
}

/// A face re-expressed as a polytope, with index maps back to the parent.
#[derive(Debug, Clone)]
pub struct FacePolytope {
    pub polytope: SimplePolytope,
    /// New facet index → parent facet index.
    pub facet_map: Vec<usize>,
    /// New vertex index → parent vertex index.
    pub vertex_map: Vec<usize>,
}

/// Binomial coefficient; exact for the sizes used here.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// h-vector from an f-vector `(f₀, …, f_{n−1})`.
///
/// Expands `Σ hᵢ t^{n−i} = Σ_{i=0}^{n} f*_{i−1} (t−1)^{n−i}` where
/// `f*_{i−1}` counts faces of codimension `i` (the face numbers of the dual
/// simplicial sphere), so `f*_{−1} = 1` is the polytope itself.
pub fn h_vector_from_f(f: &[u64]) -> Vec<i64> {
    let n = f.len();
    let codim_count = |i: usize| if i == 0 { 1 } else { f[n - i] as i64 };
    // poly[k] is the coefficient of t^k
    let mut poly = vec![0i64; n + 1];
    for i in 0..=n {
        let fi = codim_count(i);
        let e = n - i;
        for k in 0..=e {
            let sign = if (e - k) % 2 == 0 { 1 } else { -1 };
            poly[k] += fi * sign * binomial(e as u64, k as u64) as i64;
        }
    }
    // h_i is the coefficient of t^{n−i}
    (0..=n).map(|i| poly[n - i]).collect()
}

/// Faces of a polytope with lookups by vertex set and by facet set.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    dim: usize,
    faces: Vec<Face>,
    by_vertices: BTreeMap<Vec<usize>, usize>,
    by_facets: BTreeMap<Vec<usize>, usize>,
}

impl FaceLattice {
    fn new(dim: usize, mut faces: Vec<Face>) -> Self {
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));
        let by_vertices = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.vertices.clone(), i))
            .collect();
        let by_facets = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.facets.clone(), i))
            .collect();
        Self {
            dim,
            faces,
            by_vertices,
            by_facets,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    pub fn of_dim(&self, d: usize) -> impl Iterator<Item = (usize, &Face)> + '_ {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim == d)
    }

    pub fn index_by_vertices(&self, vertices: &[usize]) -> Option<usize> {
        self.by_vertices.get(vertices).copied()
    }

    /// Looks up a face by its full (sorted) facet set.
    pub fn index_by_facets(&self, facets: &[usize]) -> Option<usize> {
        self.by_facets.get(facets).copied()
    }

    /// Index of the whole polytope.
    pub fn top(&self) -> usize {
        self.by_facets[&Vec::new()]
    }

    /// Codimension-one faces of face `i`, in increasing index order.
    pub fn boundary_faces(&self, i: usize, facet_count: usize) -> Vec<usize> {
        let face = &self.faces[i];
        let mut out: Vec<usize> = (0..facet_count)
            .filter(|j| !face.facets.contains(j))
            .filter_map(|j| {
                let mut with = face.facets.clone();
                with.push(j);
                with.sort_unstable();
                self.index_by_facets(&with)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Whether face `a` is contained in face `b`.
    pub fn is_subface(&self, a: usize, b: usize) -> bool {
        let fa = &self.faces[a];
        self.faces[b].facets.iter().all(|j| fa.facets.contains(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute force over all facet subsets, independent of the per-vertex walk.
    fn faces_by_subsets(p: &SimplePolytope) -> BTreeMap<Vec<usize>, usize> {
        let m = p.facet_count();
        let mut out = BTreeMap::new();
        for subset in 0u64..(1u64 << m) {
            let verts: Vec<usize> = (0..p.vertex_count())
                .filter(|&v| (0..m).all(|j| subset >> j & 1 == 0 || p.vertex_facets(v).contains(&j)))
                .collect();
            if verts.is_empty() {
                continue;
            }
            let through = (0..m)
                .filter(|j| verts.iter().all(|&v| p.vertex_facets(v).contains(j)))
                .count();
            out.insert(verts, p.dim() - through);
        }
        out
    }

    // hₖ = Σ_{i≤k} (−1)^{k−i} C(n−i, k−i) f*_{i−1}, with f*_{i−1} the
    // number of codimension-i faces
    fn h_closed_form(f: &[u64]) -> Vec<i64> {
        let n = f.len();
        (0..=n)
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        let fi = if i == 0 { 1 } else { f[n - i] as i64 };
                        let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                        sign * binomial((n - i) as u64, (k - i) as u64) as i64 * fi
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn validate_examples() {
        assert!(SimplePolytope::simplex(2).is_ok());
        let bad = SimplePolytope::from_incidence(2, 3, vec![vec![0, 1, 2], vec![0, 2], vec![0, 1]]);
        assert_eq!(
            bad.validate(),
            Err(PolytopeError::NotSimple {
                vertex: 0,
                degree: 3,
                dim: 2
            })
        );
        let cube = SimplePolytope::cube(3).unwrap();
        let report = cube.validate().unwrap();
        assert_eq!((report.vertices, report.facets), (8, 6));
    }

    #[test]
    fn validate_rejects_malformed_incidence() {
        let p = SimplePolytope::from_incidence(2, 3, vec![vec![0, 1], vec![1, 5], vec![0, 2]]);
        assert!(matches!(
            p.validate(),
            Err(PolytopeError::FacetIndexOutOfRange { vertex: 1, facet: 5, .. })
        ));
        let p = SimplePolytope::from_incidence(2, 3, vec![vec![0, 1], vec![0, 1], vec![0, 2]]);
        assert_eq!(
            p.validate(),
            Err(PolytopeError::DuplicateVertex { first: 0, second: 1 })
        );
        let p = SimplePolytope::from_incidence(2, 4, vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(p.validate(), Err(PolytopeError::EmptyFacet { facet: 3 }));
        // two disjoint edges sharing no vertex: facets 0,1 meet at v0 only,
        // but facet set {0} holds a single vertex
        let p = SimplePolytope::from_incidence(2, 4, vec![vec![0, 1], vec![2, 3], vec![0, 3]]);
        assert!(p.validate().is_err());
    }

    #[test]
    fn face_counts() {
        let tri = SimplePolytope::simplex(2).unwrap().enumerate_faces();
        let counts: Vec<usize> = (0..=2).map(|d| tri.of_dim(d).count()).collect();
        assert_eq!(counts, [3, 3, 1]);

        let cube = SimplePolytope::cube(3).unwrap();
        let lattice = cube.enumerate_faces();
        let counts: Vec<usize> = (0..=3).map(|d| lattice.of_dim(d).count()).collect();
        assert_eq!(counts, [8, 12, 6, 1]);
        let oracle = faces_by_subsets(&cube);
        assert_eq!(oracle.len(), lattice.len());
        for face in lattice.faces() {
            assert_eq!(oracle[&face.vertices], face.dim);
        }

        let hex = SimplePolytope::polygon(6).unwrap().enumerate_faces();
        assert_eq!(hex.of_dim(1).count(), 6);
        assert_eq!(hex.of_dim(0).count(), 6);
    }

    #[test]
    fn h_vectors() {
        for n in 1..=6 {
            let s = SimplePolytope::simplex(n).unwrap();
            assert_eq!(s.h_vector(), vec![1; n + 1]);
            assert_eq!(h_closed_form(&s.f_vector()), s.h_vector());
        }
        let cube = SimplePolytope::cube(3).unwrap();
        assert_eq!(cube.f_vector(), [8, 12, 6]);
        assert_eq!(cube.h_vector(), [1, 3, 3, 1]);
        for m in 3..=9 {
            let p = SimplePolytope::polygon(m).unwrap();
            assert_eq!(p.f_vector(), [m as u64, m as u64]);
            assert_eq!(p.h_vector(), [1, m as i64 - 2, 1]);
            assert_eq!(h_closed_form(&p.f_vector()), p.h_vector());
        }
    }

    #[test]
    fn generators_and_products() {
        let seg = SimplePolytope::cube(1).unwrap();
        let square = seg.product(&seg).unwrap();
        assert!(square.is_combinatorially_equivalent(&SimplePolytope::cube(2).unwrap()));
        assert!(SimplePolytope::polygon(4)
            .unwrap()
            .is_combinatorially_equivalent(&SimplePolytope::cube(2).unwrap()));
        assert!(!SimplePolytope::polygon(5)
            .unwrap()
            .is_combinatorially_equivalent(&SimplePolytope::polygon(6).unwrap()));
        let prism = SimplePolytope::polygon(3).unwrap().product(&seg).unwrap();
        assert_eq!(prism.vertex_count(), 6);
        assert_eq!(prism.dim(), 3);
        assert_eq!(prism.facet_count(), 5);

        assert!(SimplePolytope::simplex(0).is_err());
        assert!(SimplePolytope::polygon(2).is_err());
        assert!(SimplePolytope::cube(0).is_err());
    }

    #[test]
    fn dehn_sommerville_and_vertex_degrees() {
        let seg = SimplePolytope::cube(1).unwrap();
        let fixtures = [
            SimplePolytope::simplex(4).unwrap(),
            SimplePolytope::cube(4).unwrap(),
            SimplePolytope::polygon(7).unwrap(),
            SimplePolytope::polygon(5).unwrap().product(&seg).unwrap(),
            SimplePolytope::simplex(2)
                .unwrap()
                .product(&SimplePolytope::simplex(2).unwrap())
                .unwrap(),
        ];
        for p in &fixtures {
            let h = p.h_vector();
            let n = p.dim();
            for i in 0..=n {
                assert_eq!(h[i], h[n - i]);
            }
            assert_eq!(h.iter().sum::<i64>(), p.vertex_count() as i64);
            let lattice = p.enumerate_faces();
            for face in lattice.faces() {
                if face.dim >= 1 {
                    assert!(face.vertices.len() > face.dim);
                }
            }
            for v in 0..p.vertex_count() {
                let through = lattice
                    .of_dim(n - 1)
                    .filter(|(_, f)| f.vertices.contains(&v))
                    .count();
                assert_eq!(through, n);
            }
        }
    }

    #[test]
    fn face_polytopes_are_simple() {
        let cube = SimplePolytope::cube(3).unwrap();
        let lattice = cube.enumerate_faces();
        for face in lattice.faces() {
            let fp = cube.face_polytope(face);
            fp.polytope.validate().unwrap();
            assert_eq!(fp.polytope.dim(), face.dim);
            assert_eq!(fp.polytope.vertex_count(), face.vertices.len());
        }
    }
}
