//! The small cover `X(P, λ) = P × Z₂ⁿ/∼` as a cell complex, and its quotient
//! by an index-two subgroup in general position.
//!
//! The `d`-cells are pairs `(F, c)` with `F` a `d`-face and `c` a coset of
//! `G_F = ⟨λᵢ : F ⊆ Fᵢ⟩`. Cosets are stored by their canonical representative,
//! which vanishes at the pivot columns of a fixed echelon basis of `G_F`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::chain::{
    quotient_by_action, CellAction, CellComplex, ChainError, QuotientComplex, Representative, Subcomplex,
};
use crate::charfun::{check_star, CharError, CharacteristicFunction, Subtorus};
use crate::gf2::{span_rank, Gf2Matrix, Gf2Vector, RowEchelon};
use crate::polytope::{FaceLattice, PolytopeError, SimplePolytope};
use crate::standard_action::{sphere_betti, SignSubgroup};

/// Refuse to build complexes with more cells than this.
pub const MAX_CELLS: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmallCoverError {
    Polytope(PolytopeError),
    Char(CharError),
    Chain(ChainError),
    /// `λ` has a different number of columns than `dim P`.
    RankMismatch { dim: usize, rank: usize },
    TooLarge { cells: u64 },
    FaceOutOfRange { face: usize, faces: usize },
    NotProperFace,
    /// `ξ(λ_facet) = 0`, so the subgroup is not in general position.
    NotGeneralPosition { facet: usize },
    /// A structural property that general position guarantees did not hold.
    Invariant(String),
}

impl fmt::Display for SmallCoverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmallCoverError::Polytope(e) => write!(f, "{e}"),
            SmallCoverError::Char(e) => write!(f, "{e}"),
            SmallCoverError::Chain(e) => write!(f, "{e}"),
            SmallCoverError::RankMismatch { dim, rank } => {
                write!(f, "characteristic function has {rank} columns but the polytope has dimension {dim}")
            }
            SmallCoverError::TooLarge { cells } => write!(f, "complex would have {cells} cells (limit {MAX_CELLS})"),
            SmallCoverError::FaceOutOfRange { face, faces } => {
                write!(f, "face {face} out of range ({faces} faces)")
            }
            SmallCoverError::NotProperFace => write!(f, "the whole polytope is not a proper face"),
            SmallCoverError::NotGeneralPosition { facet } => write!(
                f,
                "subgroup is not in general position: it contains the stabilizer of facet {facet}"
            ),
            SmallCoverError::Invariant(msg) => write!(f, "invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for SmallCoverError {}

impl From<PolytopeError> for SmallCoverError {
    fn from(e: PolytopeError) -> Self {
        SmallCoverError::Polytope(e)
    }
}

impl From<CharError> for SmallCoverError {
    fn from(e: CharError) -> Self {
        SmallCoverError::Char(e)
    }
}

impl From<ChainError> for SmallCoverError {
    fn from(e: ChainError) -> Self {
        SmallCoverError::Chain(e)
    }
}

/// A cell of `X(P, λ)`: face index into the lattice and canonical coset
/// representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CellId {
    pub face: usize,
    pub coset: Gf2Vector,
}

#[derive(Debug, Clone)]
pub struct SmallCoverComplex {
    polytope: SimplePolytope,
    lambda: CharacteristicFunction,
    lattice: FaceLattice,
    /// Echelon basis of `G_F` for every face.
    stabilizers: Vec<RowEchelon>,
    /// `cells[d][k]` names `d`-cell `k`.
    cells: Vec<Vec<CellId>>,
    /// Per face: coset representative → cell index in dimension `dim F`.
    lookup: Vec<BTreeMap<Gf2Vector, usize>>,
    complex: CellComplex,
}

impl SmallCoverComplex {
    /// Builds `X(P, λ)`. Requires the independence condition at every vertex.
    pub fn build(polytope: &SimplePolytope, lambda: &CharacteristicFunction) -> Result<Self, SmallCoverError> {
        let n = polytope.dim();
        if lambda.rank_n() != n {
            return Err(SmallCoverError::RankMismatch { dim: n, rank: lambda.rank_n() });
        }
        check_star(polytope, lambda)?;
        let lattice = polytope.enumerate_faces();
        let cells_total: u64 = lattice.faces().iter().map(|f| 1u64 << f.dim.min(40)).sum();
        if cells_total > MAX_CELLS {
            return Err(SmallCoverError::TooLarge { cells: cells_total });
        }
        let stabilizers: Vec<RowEchelon> = lattice
            .faces()
            .iter()
            .map(|f| {
                let rows = f.facets.iter().map(|&j| lambda.row(j).clone()).collect();
                Gf2Matrix::from_rows(n, rows).expect("λ rows have length n").row_echelon()
            })
            .collect();

        let mut cells: Vec<Vec<CellId>> = vec![Vec::new(); n + 1];
        let mut lookup: Vec<BTreeMap<Gf2Vector, usize>> = vec![BTreeMap::new(); lattice.len()];
        for (fi, face) in lattice.faces().iter().enumerate() {
            let free = stabilizers[fi].free_columns();
            debug_assert_eq!(free.len(), face.dim);
            for mask in 0u64..(1u64 << free.len()) {
                let mut coset = Gf2Vector::zeros(n);
                for (b, &col) in free.iter().enumerate() {
                    coset.set(col, mask >> b & 1 == 1);
                }
                lookup[fi].insert(coset.clone(), cells[face.dim].len());
                cells[face.dim].push(CellId { face: fi, coset });
            }
        }

        let facet_count = polytope.facet_count();
        let sub_faces: Vec<Vec<usize>> = (0..lattice.len())
            .map(|fi| lattice.boundary_faces(fi, facet_count))
            .collect();
        let mut labels = Vec::with_capacity(n + 1);
        let mut boundary = Vec::with_capacity(n + 1);
        for dim_cells in &cells {
            let mut labs = Vec::with_capacity(dim_cells.len());
            let mut bds = Vec::with_capacity(dim_cells.len());
            for cell in dim_cells {
                labs.push(cell_label(&lattice, cell));
                bds.push(
                    sub_faces[cell.face]
                        .iter()
                        .map(|&g| lookup[g][&stabilizers[g].reduce(&cell.coset)])
                        .collect(),
                );
            }
            labels.push(labs);
            boundary.push(bds);
        }
        let complex = CellComplex::new(labels, boundary)?;
        Ok(Self {
            polytope: polytope.clone(),
            lambda: lambda.clone(),
            lattice,
            stabilizers,
            cells,
            lookup,
            complex,
        })
    }

    pub fn polytope(&self) -> &SimplePolytope {
        &self.polytope
    }

    pub fn lambda(&self) -> &CharacteristicFunction {
        &self.lambda
    }

    pub fn lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn cell(&self, dim: usize, index: usize) -> &CellId {
        &self.cells[dim][index]
    }

    pub fn cells(&self, dim: usize) -> &[CellId] {
        &self.cells[dim]
    }

    /// Echelon basis of the stabilizer `G_F` of face `face`.
    pub fn stabilizer(&self, face: usize) -> &RowEchelon {
        &self.stabilizers[face]
    }

    /// Cell index of `(face, coset of v)`.
    pub fn cell_of(&self, face: usize, v: &Gf2Vector) -> usize {
        self.lookup[face][&self.stabilizers[face].reduce(v)]
    }

    pub fn betti(&self) -> Vec<usize> {
        self.complex.betti_mod2()
    }

    /// Whether `betti_i(X) = h_i(P)` for every `i`.
    pub fn betti_matches_h_vector(&self) -> bool {
        let h = self.polytope.h_vector();
        let b = self.betti();
        h.len() == b.len() && h.iter().zip(&b).all(|(&h, &b)| h == b as i64)
    }

    /// Permutations of the cells induced by translating cosets by each
    /// element of `elements`.
    pub fn translation_action(&self, elements: &[Gf2Vector]) -> Result<CellAction, SmallCoverError> {
        let n = self.dim();
        if let Some(bad) = elements.iter().find(|g| g.len() != n) {
            return Err(SmallCoverError::RankMismatch { dim: n, rank: bad.len() });
        }
        let perms = elements
            .iter()
            .map(|g| {
                self.cells
                    .iter()
                    .map(|dim_cells| {
                        dim_cells
                            .iter()
                            .map(|c| self.cell_of(c.face, &c.coset.add(g)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(CellAction::new(&self.complex, perms)?)
    }

    /// Cells `(F, c)` with `H ⊆ G_F`, i.e. fixed by every element of `H`.
    pub fn fixed_set(&self, h: &SignSubgroup) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (d, dim_cells) in self.cells.iter().enumerate() {
            for (k, c) in dim_cells.iter().enumerate() {
                let stab = &self.stabilizers[c.face];
                if h.basis().iter().all(|v| stab.contains(v)) {
                    out.push((d, k));
                }
            }
        }
        out
    }

    /// Compares the number of cells fixed by `G` with the total Betti number.
    ///
    /// The fixed cells form a subcomplex (stabilizers grow towards smaller
    /// faces), so its total Betti number is compared with that of `X`. In
    /// general position with `n ≥ 2` the fixed set is the vertex cells and
    /// this is a point count; for `n = 1` the subgroup is trivial.
    pub fn formality_check(&self, g: &Subtorus) -> FormalityReport {
        let h = SignSubgroup::from_generators(self.dim(), g.basis()).expect("subtorus lives in Z₂ⁿ");
        let fixed = self.fixed_set(&h);
        let mut selected: Vec<Vec<bool>> = self.cells.iter().map(|c| vec![false; c.len()]).collect();
        for &(d, k) in &fixed {
            selected[d][k] = true;
        }
        let sub = Subcomplex::new(&self.complex, selected).expect("fixed cells are closed under faces");
        FormalityReport {
            fixed_cells: fixed.len(),
            fixed_points_are_vertices: fixed.iter().all(|&(d, _)| d == 0),
            fixed_betti_sum: self.complex.restrict(&sub).betti_mod2().iter().sum(),
            betti_sum: self.betti().iter().sum(),
        }
    }

    /// Cells whose stabilizer in `G` is trivial, as `(dim, index)`.
    pub fn free_cells(&self, g: &Subtorus) -> Vec<(usize, usize)> {
        let n = self.dim();
        let g_rank = g.basis().len();
        let mut out = Vec::new();
        for (d, dim_cells) in self.cells.iter().enumerate() {
            for (k, c) in dim_cells.iter().enumerate() {
                let stab = &self.stabilizers[c.face];
                let gf: Vec<Gf2Vector> = (0..stab.rank()).map(|r| stab.reduced.row(r).clone()).collect();
                let mut both = gf.clone();
                both.extend(g.basis().iter().cloned());
                let meet = g_rank + gf.len() - span_rank(n, &both);
                if meet == 0 {
                    out.push((d, k));
                }
            }
        }
        out
    }

    /// Whether the cells with trivial `G`-stabilizer are exactly the cells
    /// over faces of codimension at most one.
    pub fn free_part_criterion(&self, g: &Subtorus) -> bool {
        let free = self.free_cells(g);
        let expected: Vec<(usize, usize)> = self
            .cells
            .iter()
            .enumerate()
            .flat_map(|(d, dim_cells)| {
                dim_cells
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| self.lattice.face(c.face).codim() <= 1)
                    .map(move |(k, _)| (d, k))
            })
            .collect();
        free == expected
    }

    /// The subcomplex over the faces of `face`, together with an independent
    /// rebuild over `face` as a polytope with the induced characteristic
    /// function, checked to be isomorphic to it.
    pub fn face_submanifold(&self, face: usize) -> Result<FaceSubmanifold, SmallCoverError> {
        if face >= self.lattice.len() {
            return Err(SmallCoverError::FaceOutOfRange { face, faces: self.lattice.len() });
        }
        if face == self.lattice.top() {
            return Err(SmallCoverError::NotProperFace);
        }
        let f = self.lattice.face(face);
        let fp = self.polytope.face_polytope(f);
        let stab = &self.stabilizers[face];
        let free = stab.free_columns();
        let project = |v: &Gf2Vector| stab.reduce(v).select(&free);
        let rows: Vec<Gf2Vector> = fp.facet_map.iter().map(|&j| project(self.lambda.row(j))).collect();
        let induced = CharacteristicFunction::new(Gf2Matrix::from_rows(f.dim, rows).expect("projected rows"));
        let rebuilt = SmallCoverComplex::build(&fp.polytope, &induced)?;

        let mut parent_to_sub = vec![usize::MAX; self.polytope.vertex_count()];
        for (new, &old) in fp.vertex_map.iter().enumerate() {
            parent_to_sub[old] = new;
        }
        let mut selected: Vec<Vec<bool>> = self.cells.iter().map(|c| vec![false; c.len()]).collect();
        let mut map: Vec<Vec<usize>> = vec![Vec::new(); f.dim + 1];
        for (d, dim_cells) in self.cells.iter().enumerate().take(f.dim + 1) {
            for (k, c) in dim_cells.iter().enumerate() {
                if !self.lattice.is_subface(c.face, face) {
                    continue;
                }
                selected[d][k] = true;
                let sub_vertices: Vec<usize> = {
                    let mut v: Vec<usize> = self.lattice.face(c.face).vertices.iter().map(|&v| parent_to_sub[v]).collect();
                    v.sort_unstable();
                    v
                };
                let sub_face = rebuilt
                    .lattice
                    .index_by_vertices(&sub_vertices)
                    .ok_or_else(|| SmallCoverError::Invariant(format!("subface {} missing in rebuild", self.lattice.face(c.face).label())))?;
                map[d].push(rebuilt.cell_of(sub_face, &project(&c.coset)));
            }
        }
        let sub = Subcomplex::new(&self.complex, selected.clone())?;
        let restricted = self.complex.restrict(&sub);
        let isomorphic = restricted.check_isomorphism(&rebuilt.complex, &map).is_ok();
        Ok(FaceSubmanifold {
            face,
            selected,
            induced,
            complex: restricted,
            rebuilt,
            isomorphic,
        })
    }

    /// Quotient `X/G` for `G = Ker ξ` in general position.
    pub fn orbit_space(&self, g: &Subtorus) -> Result<OrbitSpaceComplex, SmallCoverError> {
        self.orbit_space_with(g, Representative::Lowest)
    }

    /// Recomputes the quotient with the other representative choice and
    /// compares boundaries.
    pub fn quotient_is_representative_independent(&self, g: &Subtorus) -> Result<bool, SmallCoverError> {
        let low = self.orbit_quotient(g, Representative::Lowest)?;
        let high = self.orbit_quotient(g, Representative::Highest)?;
        Ok(low == high)
    }

    fn orbit_quotient(&self, g: &Subtorus, rep: Representative) -> Result<QuotientComplex, SmallCoverError> {
        let n = self.dim();
        if g.ambient_rank() != n {
            return Err(SmallCoverError::RankMismatch { dim: n, rank: g.ambient_rank() });
        }
        if let Some(facet) = (0..self.lambda.facets()).find(|&i| g.contains(self.lambda.row(i))) {
            return Err(SmallCoverError::NotGeneralPosition { facet });
        }
        let action = self.translation_action(g.basis())?;
        Ok(quotient_by_action(&self.complex, &action, rep)?)
    }

    fn orbit_space_with(&self, g: &Subtorus, rep: Representative) -> Result<OrbitSpaceComplex, SmallCoverError> {
        let n = self.dim();
        let q = self.orbit_quotient(g, rep)?;
        let top = self.lattice.top();

        // every orbit lies over a single face
        let mut face_of_cell: Vec<Vec<usize>> = q.complex.cell_counts().iter().map(|&c| vec![usize::MAX; c]).collect();
        for (d, dim_cells) in self.cells.iter().enumerate() {
            for (k, c) in dim_cells.iter().enumerate() {
                face_of_cell[d][q.orbit_of[d][k]] = c.face;
            }
        }
        let mut per_face = vec![0usize; self.lattice.len()];
        for &f in face_of_cell.iter().flatten() {
            per_face[f] += 1;
        }
        for (fi, &count) in per_face.iter().enumerate() {
            let expected = if fi == top { 2 } else { 1 };
            if count != expected {
                return Err(SmallCoverError::Invariant(format!(
                    "face {} carries {count} orbit cells, expected {expected}",
                    self.lattice.face(fi).label()
                )));
            }
        }

        // level of a cell: n − 1 − rank(G ∩ G_F)
        let g_rank = g.basis().len();
        let level_of_face: Vec<usize> = self
            .stabilizers
            .iter()
            .map(|stab| {
                let mut both: Vec<Gf2Vector> = (0..stab.rank()).map(|r| stab.reduced.row(r).clone()).collect();
                both.extend(g.basis().iter().cloned());
                let meet = g_rank + stab.rank() - span_rank(n, &both);
                n - 1 - meet
            })
            .collect();
        let level: Vec<Vec<usize>> = face_of_cell
            .iter()
            .map(|cells| cells.iter().map(|&f| level_of_face[f]).collect())
            .collect();

        let faces = components_by_level(&q.complex, &level, n);
        let mut face_index = vec![None; self.lattice.len()];
        for (qi, qf) in faces.iter().enumerate() {
            if let [(d, k)] = qf.cells[..] {
                if qf.rank + 2 <= n {
                    face_index[face_of_cell[d][k]] = Some(qi);
                }
            }
        }
        Ok(OrbitSpaceComplex {
            n,
            complex: q.complex,
            orbit_of: q.orbit_of,
            face_of_cell,
            level,
            faces,
            face_index,
            top_face: top,
        })
    }

    /// `Σ_F (−1)^{dim F} |Z₂ⁿ/(H + G_F)|`: the Euler characteristic of `X/H`
    /// counted orbit by orbit, without building the quotient.
    pub fn orbit_count_euler(&self, h: &SignSubgroup) -> i64 {
        let n = self.dim();
        self.lattice
            .faces()
            .iter()
            .enumerate()
            .map(|(fi, f)| {
                let stab = &self.stabilizers[fi];
                let mut both: Vec<Gf2Vector> = (0..stab.rank()).map(|r| stab.reduced.row(r).clone()).collect();
                both.extend(h.basis().iter().cloned());
                let orbits = 1i64 << (n - span_rank(n, &both));
                if f.dim % 2 == 0 {
                    orbits
                } else {
                    -orbits
                }
            })
            .sum()
    }
}

fn cell_label(lattice: &FaceLattice, cell: &CellId) -> String {
    format!("{}|{}", lattice.face(cell.face).label(), cell.coset.to_bit_string())
}

/// `χ(X(P, λ)) = Σ_F (−1)^{dim F} 2^{dim F}`, from the face counts alone.
pub fn euler_characteristic_formula(p: &SimplePolytope) -> i64 {
    // f-vector stops below the top face
    let mut f = p.f_vector();
    f.push(1);
    f.iter()
        .enumerate()
        .map(|(d, &count)| {
            let term = count as i64 * (1i64 << d);
            if d % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// Total Betti number of the fixed set versus that of `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalityReport {
    pub fixed_cells: usize,
    /// Every fixed cell is a 0-cell, so the fixed set is discrete.
    pub fixed_points_are_vertices: bool,
    pub fixed_betti_sum: usize,
    pub betti_sum: usize,
}

impl FormalityReport {
    pub fn pass(&self) -> bool {
        self.fixed_betti_sum == self.betti_sum
    }
}

/// The preimage of a face, as a small cover in its own right.
#[derive(Debug, Clone)]
pub struct FaceSubmanifold {
    pub face: usize,
    /// Cells of the parent complex over subfaces of `face`.
    pub selected: Vec<Vec<bool>>,
    /// Characteristic function induced on the facets of `face`.
    pub induced: CharacteristicFunction,
    /// The selected cells as a complex of their own.
    pub complex: CellComplex,
    /// `X(F, induced)` built from scratch.
    pub rebuilt: SmallCoverComplex,
    pub isomorphic: bool,
}

/// A face of `Q`: closure of a connected component of `Q_i ∖ Q_{i−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitFace {
    pub rank: usize,
    /// Open cells of the component.
    pub cells: Vec<(usize, usize)>,
}

/// `Q = X/G` with its filtration by stabilizer rank.
#[derive(Debug, Clone)]
pub struct OrbitSpaceComplex {
    n: usize,
    pub complex: CellComplex,
    /// Cell of `X` → cell of `Q`.
    pub orbit_of: Vec<Vec<usize>>,
    /// Cell of `Q` → face of `P` it lies over.
    pub face_of_cell: Vec<Vec<usize>>,
    /// Cell of `Q` → smallest `i` with the cell in `Q_i`.
    pub level: Vec<Vec<usize>>,
    pub faces: Vec<OrbitFace>,
    /// Face of `P` → face of `Q`, for faces of dimension at most `n − 2`.
    pub face_index: Vec<Option<usize>>,
    top_face: usize,
}

impl OrbitSpaceComplex {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Membership mask of `Q_i`.
    pub fn filtration_mask(&self, i: usize) -> Vec<Vec<bool>> {
        self.level
            .iter()
            .map(|cells| cells.iter().map(|&l| l <= i).collect())
            .collect()
    }

    pub fn filtration(&self, i: usize) -> Result<Subcomplex<'_>, ChainError> {
        Subcomplex::new(&self.complex, self.filtration_mask(i))
    }

    pub fn betti(&self) -> Vec<usize> {
        self.complex.betti_mod2()
    }

    /// Whether `betti(Q)` is that of `Sⁿ`.
    pub fn is_homology_sphere(&self) -> bool {
        self.betti() == sphere_betti(self.n)
    }

    /// Runs the relative-homology checks on the filtration.
    ///
    /// (a) `H_k(Q, Q_{n−2}) = 0` for `k < n − 1`.
    /// (b) each face of rank `i ≤ n − 2` has the relative homology of
    ///     `(Dⁱ, ∂Dⁱ)` modulo the part of it in `Q_{i−1}`.
    /// (c) faces of rank `i ≤ n − 2` correspond one-to-one to `i`-faces of `P`.
    pub fn filtration_checks(&self, lattice: &FaceLattice) -> FiltrationReport {
        let n = self.n;
        let mut failures = Vec::new();

        let relative_top = if n >= 2 {
            match self.filtration(n - 2) {
                Ok(sub) => self.complex.relative_betti_mod2(&sub),
                Err(e) => {
                    failures.push(format!("Q_{} is not a subcomplex: {e}", n - 2));
                    Vec::new()
                }
            }
        } else {
            self.betti()
        };
        let vanishing = n < 2 || relative_top.iter().take(n - 1).all(|&b| b == 0);
        if !vanishing {
            failures.push(format!("H_*(Q, Q_{}) = {relative_top:?} does not vanish below degree {}", n - 2, n - 1));
        }

        let mut pairs_checked = 0;
        let mut pairs_pass = true;
        for face in self.faces.iter().filter(|f| f.rank + 2 <= n) {
            pairs_checked += 1;
            let closure = Subcomplex::closure_of(&self.complex, &face.cells);
            let below: Vec<Vec<bool>> = closure
                .mask()
                .iter()
                .zip(&self.level)
                .map(|(sel, lev)| sel.iter().zip(lev).map(|(&s, &l)| s && l < face.rank).collect())
                .collect();
            let relative = match Subcomplex::new(&self.complex, below) {
                Ok(sub) => relative_betti_of_pair(&self.complex, &closure, &sub),
                Err(e) => {
                    failures.push(format!("boundary of a rank-{} face is not closed: {e}", face.rank));
                    pairs_pass = false;
                    continue;
                }
            };
            let mut expected = vec![0; face.rank + 1];
            expected[face.rank] = 1;
            if relative.iter().take(face.rank + 1).ne(expected.iter()) || relative.iter().skip(face.rank + 1).any(|&b| b != 0) {
                pairs_pass = false;
                let (d, k) = face.cells[0];
                failures.push(format!(
                    "face through cell {} has relative betti {relative:?}",
                    self.complex.label(d, k)
                ));
            }
        }

        let mut bijection = true;
        for i in 0..n.saturating_sub(1) {
            let p_faces: Vec<usize> = lattice.of_dim(i).map(|(fi, _)| fi).collect();
            let q_faces = self.faces.iter().filter(|f| f.rank == i).count();
            let mut hit = vec![false; self.faces.len()];
            let mut ok = p_faces.len() == q_faces;
            for &fi in &p_faces {
                match self.face_index[fi] {
                    Some(qi) if !hit[qi] && self.faces[qi].rank == i => hit[qi] = true,
                    _ => ok = false,
                }
            }
            if !ok {
                bijection = false;
                failures.push(format!("rank-{i} faces of Q do not match the {i}-faces of P"));
            }
        }
        let _ = self.top_face;

        FiltrationReport {
            relative_top,
            vanishing,
            face_pairs_checked: pairs_checked,
            face_pairs_pass: pairs_pass,
            face_bijection: bijection,
            failures,
        }
    }

    /// Cell map to `doubling_model(P)`: each cell goes to the cell of the face
    /// below it, and the two top cells go to the two copies of `P`.
    pub fn doubling_map(&self, lattice: &FaceLattice, model: &CellComplex) -> Result<Vec<Vec<usize>>, SmallCoverError> {
        let mut map: Vec<Vec<usize>> = Vec::with_capacity(self.complex.dims());
        let mut top_seen = 0;
        for (d, faces) in self.face_of_cell.iter().enumerate() {
            let mut row = Vec::with_capacity(faces.len());
            for &fi in faces {
                let label = if fi == self.top_face {
                    top_seen += 1;
                    if top_seen == 1 {
                        String::from("P+")
                    } else {
                        String::from("P-")
                    }
                } else {
                    lattice.face(fi).label()
                };
                match model.find(&label) {
                    Some((md, k)) if md == d => row.push(k),
                    _ => return Err(SmallCoverError::Invariant(format!("doubling model has no {d}-cell {label}"))),
                }
            }
            map.push(row);
        }
        Ok(map)
    }

    /// Whether `Q` is cell-for-cell isomorphic to the double of `P`.
    pub fn doubling_isomorphism(&self, p: &SimplePolytope, lattice: &FaceLattice) -> Result<(), SmallCoverError> {
        let model = doubling_model(p)?;
        let map = self.doubling_map(lattice, &model)?;
        Ok(self.complex.check_isomorphism(&model, &map)?)
    }
}

/// Relative Betti numbers of `(A, B)` with `B ⊆ A` subcomplexes of `parent`.
fn relative_betti_of_pair(parent: &CellComplex, a: &Subcomplex<'_>, b: &Subcomplex<'_>) -> Vec<usize> {
    let a_complex = parent.restrict(a);
    let mask: Vec<Vec<bool>> = (0..a_complex.dims())
        .map(|d| {
            a_complex
                .labels(d)
                .iter()
                .map(|l| {
                    let (pd, k) = parent.find(l).expect("restriction keeps labels");
                    b.contains(pd, k)
                })
                .collect()
        })
        .collect();
    let b_in_a = Subcomplex::new(&a_complex, mask).expect("B is closed and contained in A");
    a_complex.relative_betti_mod2(&b_in_a)
}

/// Connected components of `Q_i ∖ Q_{i−1}` for every `i`, joined through
/// boundary incidences between cells of the same level.
fn components_by_level(q: &CellComplex, level: &[Vec<usize>], n: usize) -> Vec<OrbitFace> {
    let mut offsets = Vec::with_capacity(q.dims());
    let mut total = 0;
    for d in 0..q.dims() {
        offsets.push(total);
        total += q.cell_count(d);
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for d in 1..q.dims() {
        for k in 0..q.cell_count(d) {
            for &b in q.boundary(d, k) {
                if level[d][k] == level[d - 1][b] {
                    let x = find(&mut parent, offsets[d] + k);
                    let y = find(&mut parent, offsets[d - 1] + b);
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for d in 0..q.dims() {
        for k in 0..q.cell_count(d) {
            let root = find(&mut parent, offsets[d] + k);
            groups.entry(root).or_default().push((d, k));
        }
    }
    let mut faces: Vec<OrbitFace> = groups
        .into_values()
        .map(|cells| {
            let (d, k) = cells[0];
            OrbitFace {
                rank: level[d][k].min(n),
                cells,
            }
        })
        .collect();
    faces.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| a.cells.cmp(&b.cells)));
    faces
}

/// Outcome of [`OrbitSpaceComplex::filtration_checks`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationReport {
    /// `betti(Q, Q_{n−2})`.
    pub relative_top: Vec<usize>,
    pub vanishing: bool,
    pub face_pairs_checked: usize,
    pub face_pairs_pass: bool,
    pub face_bijection: bool,
    pub failures: Vec<String>,
}

impl FiltrationReport {
    pub fn pass(&self) -> bool {
        self.vanishing && self.face_pairs_pass && self.face_bijection
    }
}

/// Two copies of `P` glued along the boundary: one cell per proper face and
/// two top cells `P+`, `P-`, each bounded by every facet.
pub fn doubling_model(p: &SimplePolytope) -> Result<CellComplex, SmallCoverError> {
    let lattice = p.enumerate_faces();
    let top = lattice.top();
    let n = p.dim();
    let mut index = vec![usize::MAX; lattice.len()];
    let mut builder = CellComplex::builder();
    for (fi, face) in lattice.faces().iter().enumerate() {
        if fi == top {
            continue;
        }
        let boundary = lattice
            .boundary_faces(fi, p.facet_count())
            .iter()
            .map(|&g| index[g])
            .collect();
        index[fi] = builder.add_cell(face.dim, face.label(), boundary);
    }
    let facets: Vec<usize> = lattice
        .boundary_faces(top, p.facet_count())
        .iter()
        .map(|&g| index[g])
        .collect();
    builder.add_cell(n, "P+", facets.clone());
    builder.add_cell(n, "P-", facets);
    Ok(builder.build()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfun::orientability_functional;

    fn lam(n: usize, rows: &[&str]) -> CharacteristicFunction {
        CharacteristicFunction::new(Gf2Matrix::parse_rows(n, rows).unwrap())
    }

    fn subtorus(xi: &str) -> Subtorus {
        Subtorus::from_functional(Gf2Vector::parse(xi).unwrap()).unwrap()
    }

    #[test]
    fn real_projective_plane() {
        let p = SimplePolytope::simplex(2).unwrap();
        let x = SmallCoverComplex::build(&p, &lam(2, &["10", "01", "11"])).unwrap();
        assert_eq!(x.complex().cell_counts(), [3, 6, 4]);
        assert_eq!(x.betti(), [1, 1, 1]);
        assert!(x.betti_matches_h_vector());
    }

    #[test]
    fn torus_and_circle() {
        let sq = SimplePolytope::cube(2).unwrap();
        let t2 = SmallCoverComplex::build(&sq, &lam(2, &["10", "10", "01", "01"])).unwrap();
        assert_eq!(t2.betti(), [1, 2, 1]);
        let seg = SimplePolytope::simplex(1).unwrap();
        let s1 = SmallCoverComplex::build(&seg, &lam(1, &["1", "1"])).unwrap();
        assert_eq!(s1.betti(), [1, 1]);
    }

    #[test]
    fn star_failure_propagates() {
        let p = SimplePolytope::simplex(2).unwrap();
        assert!(matches!(
            SmallCoverComplex::build(&p, &lam(2, &["10", "10", "01"])),
            Err(SmallCoverError::Char(CharError::StarFails { .. }))
        ));
    }

    #[test]
    fn fixed_sets() {
        let sq = SimplePolytope::cube(2).unwrap();
        let t2 = SmallCoverComplex::build(&sq, &lam(2, &["10", "10", "01", "01"])).unwrap();
        let full = t2.fixed_set(&SignSubgroup::full(2));
        assert_eq!(full.len(), 4);
        assert!(full.iter().all(|&(d, _)| d == 0));
        assert_eq!(t2.fixed_set(&SignSubgroup::trivial(2)).len(), t2.complex().total_cells());
        let g = subtorus("11");
        let report = t2.formality_check(&g);
        assert_eq!(report.fixed_cells, 4);
        assert!(report.fixed_points_are_vertices);
        assert!(report.pass());
        assert!(t2.free_part_criterion(&g));
    }

    #[test]
    fn torus_quotient() {
        let sq = SimplePolytope::cube(2).unwrap();
        let t2 = SmallCoverComplex::build(&sq, &lam(2, &["10", "10", "01", "01"])).unwrap();
        let q = t2.orbit_space(&subtorus("11")).unwrap();
        assert_eq!(q.complex.cell_counts(), [4, 4, 2]);
        assert_eq!(q.complex.euler_characteristic(), 2);
        assert_eq!(q.betti(), [1, 0, 1]);
        assert_eq!(t2.orbit_count_euler(&SignSubgroup::from_generators(2, subtorus("11").basis()).unwrap()), 2);
        let report = q.filtration_checks(t2.lattice());
        assert!(report.pass(), "{report:?}");
        // H_1(S², four points) has rank 3
        assert_eq!(report.relative_top, [0, 3, 1]);
        q.doubling_isomorphism(t2.polytope(), t2.lattice()).unwrap();
        assert!(t2.quotient_is_representative_independent(&subtorus("11")).unwrap());
    }

    #[test]
    fn rp3_quotient() {
        let p = SimplePolytope::simplex(3).unwrap();
        let x = SmallCoverComplex::build(&p, &lam(3, &["100", "010", "001", "111"])).unwrap();
        assert_eq!(x.betti(), [1, 1, 1, 1]);
        let o = orientability_functional(x.lambda()).unwrap().unwrap();
        assert_eq!(o.subtorus.xi().to_bit_string(), "111");
        let q = x.orbit_space(&o.subtorus).unwrap();
        assert_eq!(q.betti(), [1, 0, 0, 1]);
        let report = q.filtration_checks(x.lattice());
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.relative_top[..2], [0, 0]);
        q.doubling_isomorphism(x.polytope(), x.lattice()).unwrap();
    }

    #[test]
    fn non_general_position_refused() {
        let sq = SimplePolytope::cube(2).unwrap();
        let t2 = SmallCoverComplex::build(&sq, &lam(2, &["10", "10", "01", "01"])).unwrap();
        assert_eq!(
            t2.orbit_space(&subtorus("01")).unwrap_err(),
            SmallCoverError::NotGeneralPosition { facet: 0 }
        );
    }

    #[test]
    fn face_submanifolds() {
        let c3 = SimplePolytope::cube(3).unwrap();
        let x = SmallCoverComplex::build(&c3, &lam(3, &["100", "100", "010", "010", "001", "001"])).unwrap();
        let lattice = x.lattice().clone();
        for (fi, face) in lattice.faces().iter().enumerate() {
            if fi == lattice.top() {
                assert_eq!(x.face_submanifold(fi).unwrap_err(), SmallCoverError::NotProperFace);
                continue;
            }
            let sub = x.face_submanifold(fi).unwrap();
            assert!(sub.isomorphic, "face {}", face.label());
            assert_eq!(sub.complex.betti_mod2().iter().sum::<usize>(), face.vertices.len());
            if face.dim == 1 {
                assert_eq!(sub.complex.betti_mod2(), [1, 1]);
            }
            if face.dim == 0 {
                assert_eq!(sub.complex.cell_counts(), [1]);
            }
        }
        // a Klein bottle on a facet of another cube cover
        let y = SmallCoverComplex::build(&c3, &lam(3, &["100", "110", "010", "010", "001", "001"])).unwrap();
        let facet = lattice.index_by_facets(&[4]).unwrap();
        let sub = y.face_submanifold(facet).unwrap();
        assert!(sub.isomorphic);
        assert_eq!(sub.complex.betti_mod2(), [1, 2, 1]);
    }

    #[test]
    fn euler_formula() {
        for m in 3..=8 {
            let p = SimplePolytope::polygon(m).unwrap();
            assert_eq!(euler_characteristic_formula(&p), 4 - m as i64);
        }
        assert_eq!(euler_characteristic_formula(&SimplePolytope::cube(3).unwrap()), 0);
    }

    #[test]
    fn doubling_models() {
        let seg = doubling_model(&SimplePolytope::simplex(1).unwrap()).unwrap();
        assert_eq!(seg.cell_counts(), [2, 2]);
        assert_eq!(seg.betti_mod2(), [1, 1]);
        let sq = doubling_model(&SimplePolytope::cube(2).unwrap()).unwrap();
        assert_eq!(sq.cell_counts(), [4, 4, 2]);
        assert_eq!(sq.euler_characteristic(), 2);
        let c3 = doubling_model(&SimplePolytope::cube(3).unwrap()).unwrap();
        assert_eq!(c3.cell_counts(), [8, 12, 6, 2]);
        assert_eq!(c3.betti_mod2(), [1, 0, 0, 1]);
    }
}
