//! Graded cell complexes with mod-2 boundaries.
//!
//! A cell's boundary is the list of codimension-one cells with odd incidence.
//! `∂∘∂ = 0` is verified whenever a complex is constructed, including every
//! quotient and subdivision produced here.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gf2::{Gf2Matrix, Gf2Vector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainError {
    /// Label and boundary tables disagree in shape.
    Shape(String),
    BoundaryOutOfRange { dim: usize, cell: usize, target: usize },
    BoundaryOfVertex { cell: usize },
    BoundarySquaredNonzero { dim: usize, cell: usize },
    DuplicateLabel(String),
    NotBoundaryClosed { dim: usize, cell: usize, missing: usize },
    BadPermutation { element: usize, dim: usize },
    ActionNotCellular { element: usize, dim: usize, cell: usize },
    /// `element` maps the cell to itself but moves its boundary.
    RegularityViolation { element: usize, dim: usize, cell: usize },
    RepresentativeDependence { dim: usize, orbit: usize },
    NotIsomorphic(String),
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::Shape(msg) => write!(f, "malformed complex: {msg}"),
            ChainError::BoundaryOutOfRange { dim, cell, target } => write!(
                f,
                "cell {cell} in dimension {dim} has boundary entry {target} out of range"
            ),
            ChainError::BoundaryOfVertex { cell } => {
                write!(f, "0-cell {cell} has a nonempty boundary")
            }
            ChainError::BoundarySquaredNonzero { dim, cell } => {
                write!(f, "boundary of boundary of cell {cell} in dimension {dim} is nonzero")
            }
            ChainError::DuplicateLabel(l) => write!(f, "duplicate cell label {l:?}"),
            ChainError::NotBoundaryClosed { dim, cell, missing } => write!(
                f,
                "subcomplex not closed: cell {cell} in dimension {dim} needs face {missing}"
            ),
            ChainError::BadPermutation { element, dim } => {
                write!(f, "group element {element} is not a permutation in dimension {dim}")
            }
            ChainError::ActionNotCellular { element, dim, cell } => write!(
                f,
                "group element {element} does not commute with the boundary of cell {cell} (dimension {dim})"
            ),
            ChainError::RegularityViolation { element, dim, cell } => write!(
                f,
                "group element {element} fixes cell {cell} (dimension {dim}) but moves its boundary"
            ),
            ChainError::RepresentativeDependence { dim, orbit } => write!(
                f,
                "boundary of orbit {orbit} in dimension {dim} depends on the representative"
            ),
            ChainError::NotIsomorphic(msg) => write!(f, "not isomorphic: {msg}"),
        }
    }
}

impl core::error::Error for ChainError {}

/// Sorts and cancels repeated entries in pairs.
fn reduce_mod2(mut entries: Vec<usize>) -> Vec<usize> {
    entries.sort_unstable();
    let mut out: Vec<usize> = Vec::with_capacity(entries.len());
    for e in entries {
        if out.last() == Some(&e) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    labels: Vec<Vec<String>>,
    boundary: Vec<Vec<Vec<usize>>>,
}

/// Incremental construction; cells are indexed per dimension in insertion
/// order.
#[derive(Debug, Default, Clone)]
pub struct CellComplexBuilder {
    labels: Vec<Vec<String>>,
    boundary: Vec<Vec<Vec<usize>>>,
}

impl CellComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a `dim`-cell and returns its index within that dimension.
    pub fn add_cell(&mut self, dim: usize, label: impl Into<String>, boundary: Vec<usize>) -> usize {
        while self.labels.len() <= dim {
            self.labels.push(Vec::new());
            self.boundary.push(Vec::new());
        }
        self.labels[dim].push(label.into());
        self.boundary[dim].push(boundary);
        self.labels[dim].len() - 1
    }

    pub fn build(self) -> Result<CellComplex, ChainError> {
        CellComplex::new(self.labels, self.boundary)
    }
}

impl CellComplex {
    /// Builds a complex from per-dimension labels and boundary lists.
    /// Repeated boundary entries cancel in pairs.
    pub fn new(labels: Vec<Vec<String>>, boundary: Vec<Vec<Vec<usize>>>) -> Result<Self, ChainError> {
        if labels.len() != boundary.len() {
            return Err(ChainError::Shape(format!(
                "{} label dimensions vs {} boundary dimensions",
                labels.len(),
                boundary.len()
            )));
        }
        let mut reduced = Vec::with_capacity(boundary.len());
        for (d, (labs, bds)) in labels.iter().zip(boundary).enumerate() {
            if labs.len() != bds.len() {
                return Err(ChainError::Shape(format!(
                    "dimension {d}: {} labels vs {} boundaries",
                    labs.len(),
                    bds.len()
                )));
            }
            let mut dim_out = Vec::with_capacity(bds.len());
            for (i, b) in bds.into_iter().enumerate() {
                if d == 0 {
                    if !b.is_empty() {
                        return Err(ChainError::BoundaryOfVertex { cell: i });
                    }
                    dim_out.push(b);
                    continue;
                }
                let below = labels[d - 1].len();
                if let Some(&t) = b.iter().find(|&&t| t >= below) {
                    return Err(ChainError::BoundaryOutOfRange {
                        dim: d,
                        cell: i,
                        target: t,
                    });
                }
                dim_out.push(reduce_mod2(b));
            }
            reduced.push(dim_out);
        }
        let mut seen = BTreeSet::new();
        for l in labels.iter().flatten() {
            if !seen.insert(l.as_str()) {
                return Err(ChainError::DuplicateLabel(l.clone()));
            }
        }
        let complex = Self {
            labels,
            boundary: reduced,
        };
        complex.check_boundary_squared()?;
        Ok(complex)
    }

    pub fn builder() -> CellComplexBuilder {
        CellComplexBuilder::new()
    }

    /// Number of dimensions with storage (top dimension + 1), possibly with
    /// empty trailing dimensions.
    pub fn dims(&self) -> usize {
        self.labels.len()
    }

    /// Highest dimension holding a cell.
    pub fn top_dim(&self) -> Option<usize> {
        (0..self.labels.len()).rev().find(|&d| !self.labels[d].is_empty())
    }

    pub fn cell_count(&self, dim: usize) -> usize {
        self.labels.get(dim).map_or(0, Vec::len)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn label(&self, dim: usize, cell: usize) -> &str {
        &self.labels[dim][cell]
    }

    pub fn labels(&self, dim: usize) -> &[String] {
        &self.labels[dim]
    }

    pub fn boundary(&self, dim: usize, cell: usize) -> &[usize] {
        &self.boundary[dim][cell]
    }

    pub fn find(&self, label: &str) -> Option<(usize, usize)> {
        self.labels
            .iter()
            .enumerate()
            .find_map(|(d, ls)| ls.iter().position(|l| l == label).map(|i| (d, i)))
    }

    pub fn check_boundary_squared(&self) -> Result<(), ChainError> {
        for d in 2..self.boundary.len() {
            for (i, b) in self.boundary[d].iter().enumerate() {
                let mut acc = Gf2Vector::zeros(self.cell_count(d - 2));
                for &face in b {
                    for &ff in &self.boundary[d - 1][face] {
                        acc.flip(ff);
                    }
                }
                if !acc.is_zero() {
                    return Err(ChainError::BoundarySquaredNonzero { dim: d, cell: i });
                }
            }
        }
        Ok(())
    }

    /// Matrix of `∂_d`: one row per `d`-cell, one column per `(d−1)`-cell.
    pub fn boundary_matrix(&self, dim: usize) -> Gf2Matrix {
        let cols = if dim == 0 { 0 } else { self.cell_count(dim - 1) };
        let mut m = Gf2Matrix::zeros(self.cell_count(dim), cols);
        if dim > 0 {
            for (i, b) in self.boundary[dim].iter().enumerate() {
                for &j in b {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Mod-2 Betti numbers `b_0 … b_top`.
    pub fn betti_mod2(&self) -> Vec<usize> {
        self.relative_betti_masked(None)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.labels
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Betti numbers of the quotient chain complex `C/A`. Over a field these
    /// are also the ranks of relative cohomology.
    pub fn relative_betti_mod2(&self, sub: &Subcomplex<'_>) -> Vec<usize> {
        self.relative_betti_masked(Some(&sub.selected))
    }

    fn relative_betti_masked(&self, excluded: Option<&Vec<Vec<bool>>>) -> Vec<usize> {
        let Some(top) = self.top_dim() else {
            return Vec::new();
        };
        let keep = |d: usize, i: usize| excluded.is_none_or(|ex| !ex[d][i]);
        let kept: Vec<Vec<usize>> = (0..=top)
            .map(|d| (0..self.cell_count(d)).filter(|&i| keep(d, i)).collect())
            .collect();
        // ranks[d] = rank of the relative ∂_d
        let mut ranks = vec![0usize; top + 2];
        for d in 1..=top {
            let mut col_of = vec![usize::MAX; self.cell_count(d - 1)];
            for (k, &i) in kept[d - 1].iter().enumerate() {
                col_of[i] = k;
            }
            let rows = kept[d]
                .iter()
                .map(|&i| {
                    let mut row = Gf2Vector::zeros(kept[d - 1].len());
                    for &j in &self.boundary[d][i] {
                        if col_of[j] != usize::MAX {
                            row.set(col_of[j], true);
                        }
                    }
                    row
                })
                .collect();
            ranks[d] = Gf2Matrix::from_rows(kept[d - 1].len(), rows)
                .expect("rows built with matching width")
                .rank();
        }
        (0..=top)
            .map(|d| kept[d].len() - ranks[d] - ranks[d + 1])
            .collect()
    }

    /// Face poset: for each cell, every cell in the closure of its boundary.
    fn closure_below(&self) -> Vec<Vec<BTreeSet<(usize, usize)>>> {
        let mut below: Vec<Vec<BTreeSet<(usize, usize)>>> = Vec::with_capacity(self.dims());
        for d in 0..self.dims() {
            let mut this_dim = Vec::with_capacity(self.cell_count(d));
            for i in 0..self.cell_count(d) {
                let mut set = BTreeSet::new();
                if d > 0 {
                    for &j in &self.boundary[d][i] {
                        set.insert((d - 1, j));
                        set.extend(below[d - 1][j].iter().copied());
                    }
                }
                this_dim.push(set);
            }
            below.push(this_dim);
        }
        below
    }

    /// Barycentric subdivision: one `k`-simplex per strictly increasing chain
    /// `σ₀ < … < σ_k` in the face poset. Meaningful for regular complexes.
    ///
    /// Also returns, per dimension, the chain of cells `(dim, index)` behind
    /// each new simplex, top element last.
    pub fn barycentric_subdivision(&self) -> Result<(CellComplex, Vec<Vec<Vec<(usize, usize)>>>), ChainError> {
        let below = self.closure_below();
        // chains ending at each cell, grouped by length
        let mut chains: Vec<Vec<(usize, usize)>> = Vec::new();
        for d in 0..self.dims() {
            for i in 0..self.cell_count(d) {
                let mut stack: Vec<Vec<(usize, usize)>> = vec![vec![(d, i)]];
                while let Some(chain) = stack.pop() {
                    let bottom = chain[0];
                    for &lower in &below[bottom.0][bottom.1] {
                        let mut longer = Vec::with_capacity(chain.len() + 1);
                        longer.push(lower);
                        longer.extend_from_slice(&chain);
                        stack.push(longer);
                    }
                    chains.push(chain);
                }
            }
        }
        let top = chains.iter().map(Vec::len).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Vec<(usize, usize)>>> = vec![Vec::new(); top];
        for c in chains {
            by_dim[c.len() - 1].push(c);
        }
        for dim_chains in &mut by_dim {
            dim_chains.sort();
        }
        let index: Vec<BTreeMap<&Vec<(usize, usize)>, usize>> = by_dim
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(k, c)| (c, k)).collect())
            .collect();
        let mut labels = Vec::with_capacity(top);
        let mut boundary = Vec::with_capacity(top);
        for (k, cs) in by_dim.iter().enumerate() {
            let mut labs = Vec::with_capacity(cs.len());
            let mut bds = Vec::with_capacity(cs.len());
            for c in cs {
                let mut label = String::from("[");
                for (pos, &(d, i)) in c.iter().enumerate() {
                    if pos > 0 {
                        label.push('<');
                    }
                    label.push_str(&self.labels[d][i]);
                }
                label.push(']');
                labs.push(label);
                let faces = if k == 0 {
                    Vec::new()
                } else {
                    (0..c.len())
                        .map(|drop| {
                            let mut face = c.clone();
                            face.remove(drop);
                            index[k - 1][&face]
                        })
                        .collect()
                };
                bds.push(faces);
            }
            labels.push(labs);
            boundary.push(bds);
        }
        Ok((CellComplex::new(labels, boundary)?, by_dim))
    }

    /// Checks that `map[d][i]` (an index into `other`'s `d`-cells) is a
    /// bijection in every dimension commuting with the boundary.
    pub fn check_isomorphism(&self, other: &Self, map: &[Vec<usize>]) -> Result<(), ChainError> {
        if self.cell_counts() != other.cell_counts() {
            return Err(ChainError::NotIsomorphic(format!(
                "cell counts {:?} vs {:?}",
                self.cell_counts(),
                other.cell_counts()
            )));
        }
        if map.len() != self.dims() {
            return Err(ChainError::NotIsomorphic("map has wrong number of dimensions".into()));
        }
        for d in 0..self.dims() {
            let mut hit = vec![false; other.cell_count(d)];
            if map[d].len() != self.cell_count(d) {
                return Err(ChainError::NotIsomorphic(format!("map incomplete in dimension {d}")));
            }
            for &j in &map[d] {
                if j >= hit.len() || hit[j] {
                    return Err(ChainError::NotIsomorphic(format!(
                        "map is not a bijection in dimension {d}"
                    )));
                }
                hit[j] = true;
            }
            if d == 0 {
                continue;
            }
            for i in 0..self.cell_count(d) {
                let mut image: Vec<usize> = self.boundary[d][i].iter().map(|&b| map[d - 1][b]).collect();
                image.sort_unstable();
                if image != other.boundary[d][map[d][i]] {
                    return Err(ChainError::NotIsomorphic(format!(
                        "boundary of {} does not match boundary of {}",
                        self.labels[d][i],
                        other.labels[d][map[d][i]]
                    )));
                }
            }
        }
        Ok(())
    }

    /// The complex made of the selected cells only.
    pub fn restrict(&self, sub: &Subcomplex<'_>) -> CellComplex {
        let mut new_index: Vec<Vec<usize>> = Vec::with_capacity(self.dims());
        let mut labels = Vec::with_capacity(self.dims());
        let mut boundary = Vec::with_capacity(self.dims());
        for d in 0..self.dims() {
            let mut idx = vec![usize::MAX; self.cell_count(d)];
            let mut labs = Vec::new();
            let mut bds = Vec::new();
            for i in 0..self.cell_count(d) {
                if sub.selected[d][i] {
                    idx[i] = labs.len();
                    labs.push(self.labels[d][i].clone());
                    bds.push(
                        self.boundary[d][i]
                            .iter()
                            .map(|&b| new_index[d - 1][b])
                            .collect(),
                    );
                }
            }
            new_index.push(idx);
            labels.push(labs);
            boundary.push(bds);
        }
        while labels.last().is_some_and(Vec::is_empty) {
            labels.pop();
            boundary.pop();
        }
        CellComplex::new(labels, boundary).expect("restriction of a valid complex to a closed subset")
    }
}

/// A boundary-closed set of cells of a parent complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcomplex<'a> {
    parent: &'a CellComplex,
    selected: Vec<Vec<bool>>,
}

impl<'a> Subcomplex<'a> {
    /// Validates that `selected` is closed under taking boundaries.
    pub fn new(parent: &'a CellComplex, selected: Vec<Vec<bool>>) -> Result<Self, ChainError> {
        if selected.len() != parent.dims()
            || selected
                .iter()
                .zip(&parent.labels)
                .any(|(s, l)| s.len() != l.len())
        {
            return Err(ChainError::Shape("selection does not match the complex".into()));
        }
        for d in 1..parent.dims() {
            for i in 0..parent.cell_count(d) {
                if !selected[d][i] {
                    continue;
                }
                if let Some(&missing) = parent.boundary[d][i].iter().find(|&&b| !selected[d - 1][b]) {
                    return Err(ChainError::NotBoundaryClosed {
                        dim: d,
                        cell: i,
                        missing,
                    });
                }
            }
        }
        Ok(Self { parent, selected })
    }

    pub fn empty(parent: &'a CellComplex) -> Self {
        Self {
            parent,
            selected: parent.labels.iter().map(|l| vec![false; l.len()]).collect(),
        }
    }

    /// Smallest subcomplex containing the given `(dim, index)` cells.
    pub fn closure_of(parent: &'a CellComplex, cells: &[(usize, usize)]) -> Self {
        let mut sub = Self::empty(parent);
        let mut stack: Vec<(usize, usize)> = cells.to_vec();
        while let Some((d, i)) = stack.pop() {
            if sub.selected[d][i] {
                continue;
            }
            sub.selected[d][i] = true;
            if d > 0 {
                stack.extend(parent.boundary[d][i].iter().map(|&b| (d - 1, b)));
            }
        }
        sub
    }

    pub fn parent(&self) -> &'a CellComplex {
        self.parent
    }

    pub fn contains(&self, dim: usize, cell: usize) -> bool {
        self.selected[dim][cell]
    }

    pub fn mask(&self) -> &[Vec<bool>] {
        &self.selected
    }

    pub fn cell_count(&self) -> usize {
        self.selected.iter().flatten().filter(|&&s| s).count()
    }

    /// Cells of both.
    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            parent: self.parent,
            selected: self
                .selected
                .iter()
                .zip(&other.selected)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| *x && *y).collect())
                .collect(),
        }
    }

    pub fn to_complex(&self) -> CellComplex {
        self.parent.restrict(self)
    }
}

/// A finite group acting on a complex by cell permutations.
///
/// `elements[g][d][i]` is the image of `d`-cell `i` under element `g`. The
/// list is meant to hold every group element, not just generators; use
/// [`CellAction::generated_by`] to close a generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellAction {
    elements: Vec<Vec<Vec<usize>>>,
}

impl CellAction {
    pub fn new(complex: &CellComplex, elements: Vec<Vec<Vec<usize>>>) -> Result<Self, ChainError> {
        for (g, el) in elements.iter().enumerate() {
            if el.len() != complex.dims() {
                return Err(ChainError::BadPermutation { element: g, dim: el.len() });
            }
            for (d, perm) in el.iter().enumerate() {
                let n = complex.cell_count(d);
                let mut hit = vec![false; n];
                if perm.len() != n {
                    return Err(ChainError::BadPermutation { element: g, dim: d });
                }
                for &t in perm {
                    if t >= n || hit[t] {
                        return Err(ChainError::BadPermutation { element: g, dim: d });
                    }
                    hit[t] = true;
                }
            }
        }
        Ok(Self { elements })
    }

    /// Closes a set of generators under composition (identity included).
    pub fn generated_by(complex: &CellComplex, generators: Vec<Vec<Vec<usize>>>) -> Result<Self, ChainError> {
        let gens = Self::new(complex, generators)?;
        let identity: Vec<Vec<usize>> = (0..complex.dims()).map(|d| (0..complex.cell_count(d)).collect()).collect();
        let mut seen: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
        let mut out = Vec::new();
        let mut queue = vec![identity];
        while let Some(el) = queue.pop() {
            if !seen.insert(el.clone()) {
                continue;
            }
            for g in &gens.elements {
                let composed: Vec<Vec<usize>> = el
                    .iter()
                    .zip(g)
                    .map(|(a, b)| a.iter().map(|&x| b[x]).collect())
                    .collect();
                if !seen.contains(&composed) {
                    queue.push(composed);
                }
            }
            out.push(el);
        }
        out.sort();
        Ok(Self { elements: out })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn image(&self, element: usize, dim: usize, cell: usize) -> usize {
        self.elements[element][dim][cell]
    }

    fn subdivided(&self, chains: &[Vec<Vec<(usize, usize)>>]) -> Vec<Vec<Vec<usize>>> {
        let index: Vec<BTreeMap<&Vec<(usize, usize)>, usize>> = chains
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(k, c)| (c, k)).collect())
            .collect();
        self.elements
            .iter()
            .map(|el| {
                chains
                    .iter()
                    .enumerate()
                    .map(|(k, cs)| {
                        cs.iter()
                            .map(|c| {
                                let image: Vec<(usize, usize)> =
                                    c.iter().map(|&(d, i)| (d, el[d][i])).collect();
                                index[k][&image]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Which orbit member supplies the boundary of an orbit cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Representative {
    #[default]
    Lowest,
    Highest,
}

/// A quotient complex together with the cell → orbit map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientComplex {
    pub complex: CellComplex,
    /// `orbit_of[d][i]` is the quotient cell containing `d`-cell `i`.
    pub orbit_of: Vec<Vec<usize>>,
}

/// Quotient of `complex` by a cellular group action; cells are orbits.
///
/// Fails if some element does not commute with the boundary, or if an
/// element maps a cell to itself without fixing its boundary.
pub fn quotient_by_action(
    complex: &CellComplex,
    action: &CellAction,
    representative: Representative,
) -> Result<QuotientComplex, ChainError> {
    for (g, el) in action.elements.iter().enumerate() {
        for d in 1..complex.dims() {
            for i in 0..complex.cell_count(d) {
                let image = el[d][i];
                let moved = reduce_mod2(complex.boundary[d][i].iter().map(|&b| el[d - 1][b]).collect());
                if moved != complex.boundary[d][image] {
                    return Err(ChainError::ActionNotCellular { element: g, dim: d, cell: i });
                }
                if image == i && complex.boundary[d][i].iter().any(|&b| el[d - 1][b] != b) {
                    return Err(ChainError::RegularityViolation { element: g, dim: d, cell: i });
                }
            }
        }
    }
    let mut orbit_of: Vec<Vec<usize>> = Vec::with_capacity(complex.dims());
    let mut members: Vec<Vec<Vec<usize>>> = Vec::with_capacity(complex.dims());
    for d in 0..complex.dims() {
        let n = complex.cell_count(d);
        let mut of = vec![usize::MAX; n];
        let mut dim_members: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if of[i] != usize::MAX {
                continue;
            }
            let id = dim_members.len();
            // closure under all listed elements, to also accept generators
            let mut orbit = vec![i];
            of[i] = id;
            let mut k = 0;
            while k < orbit.len() {
                let c = orbit[k];
                for el in &action.elements {
                    let t = el[d][c];
                    if of[t] == usize::MAX {
                        of[t] = id;
                        orbit.push(t);
                    }
                }
                k += 1;
            }
            orbit.sort_unstable();
            dim_members.push(orbit);
        }
        orbit_of.push(of);
        members.push(dim_members);
    }
    let mut labels = Vec::with_capacity(complex.dims());
    let mut boundary = Vec::with_capacity(complex.dims());
    for d in 0..complex.dims() {
        let mut labs = Vec::with_capacity(members[d].len());
        let mut bds = Vec::with_capacity(members[d].len());
        for (o, orbit) in members[d].iter().enumerate() {
            labs.push(complex.labels[d][orbit[0]].clone());
            if d == 0 {
                bds.push(Vec::new());
                continue;
            }
            let induced = |c: usize| reduce_mod2(complex.boundary[d][c].iter().map(|&b| orbit_of[d - 1][b]).collect());
            let rep = match representative {
                Representative::Lowest => orbit[0],
                Representative::Highest => orbit[orbit.len() - 1],
            };
            let chosen = induced(rep);
            if orbit.iter().any(|&c| induced(c) != chosen) {
                return Err(ChainError::RepresentativeDependence { dim: d, orbit: o });
            }
            bds.push(chosen);
        }
        labels.push(labs);
        boundary.push(bds);
    }
    Ok(QuotientComplex {
        complex: CellComplex::new(labels, boundary)?,
        orbit_of,
    })
}

/// Like [`quotient_by_action`], but on a regularity violation retries on the
/// barycentric subdivision, where a cell fixed setwise is fixed pointwise.
/// The flag reports whether the subdivision was needed.
pub fn quotient_with_subdivision_fallback(
    complex: &CellComplex,
    action: &CellAction,
) -> Result<(QuotientComplex, bool), ChainError> {
    match quotient_by_action(complex, action, Representative::Lowest) {
        Ok(q) => Ok((q, false)),
        Err(ChainError::RegularityViolation { .. }) => {
            let (sd, chains) = complex.barycentric_subdivision()?;
            let sd_action = CellAction::new(&sd, action.subdivided(&chains))?;
            let q = quotient_by_action(&sd, &sd_action, Representative::Lowest)?;
            Ok((q, true))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_one_loop() -> CellComplex {
        let mut b = CellComplex::builder();
        b.add_cell(0, "v", vec![]);
        b.add_cell(1, "e", vec![0, 0]);
        b.build().unwrap()
    }

    /// Disc as one 2-cell on a triangle.
    fn disc() -> CellComplex {
        let mut b = CellComplex::builder();
        for v in ["a", "b", "c"] {
            b.add_cell(0, v, vec![]);
        }
        b.add_cell(1, "ab", vec![0, 1]);
        b.add_cell(1, "bc", vec![1, 2]);
        b.add_cell(1, "ca", vec![2, 0]);
        b.add_cell(2, "abc", vec![0, 1, 2]);
        b.build().unwrap()
    }

    /// Boundary of a square with vertices a,b,c,d.
    fn square_boundary() -> CellComplex {
        let mut b = CellComplex::builder();
        for v in ["a", "b", "c", "d"] {
            b.add_cell(0, v, vec![]);
        }
        b.add_cell(1, "ab", vec![0, 1]);
        b.add_cell(1, "bc", vec![1, 2]);
        b.add_cell(1, "cd", vec![2, 3]);
        b.add_cell(1, "da", vec![3, 0]);
        b.build().unwrap()
    }

    #[test]
    fn small_betti() {
        let mut p = CellComplex::builder();
        p.add_cell(0, "pt", vec![]);
        let point = p.build().unwrap();
        assert_eq!(point.betti_mod2(), [1]);
        assert_eq!(circle_one_loop().betti_mod2(), [1, 1]);
        assert_eq!(disc().betti_mod2(), [1, 0, 0]);
        assert_eq!(disc().euler_characteristic(), 1);
    }

    #[test]
    fn construction_checks() {
        let mut b = CellComplex::builder();
        b.add_cell(0, "a", vec![]);
        b.add_cell(1, "e", vec![3]);
        assert!(matches!(b.build(), Err(ChainError::BoundaryOutOfRange { .. })));

        // 2-cell on a path whose boundary is not a cycle
        let mut b = CellComplex::builder();
        b.add_cell(0, "a", vec![]);
        b.add_cell(0, "b", vec![]);
        b.add_cell(1, "ab", vec![0, 1]);
        b.add_cell(2, "bad", vec![0]);
        assert!(matches!(b.build(), Err(ChainError::BoundarySquaredNonzero { dim: 2, cell: 0 })));

        let mut b = CellComplex::builder();
        b.add_cell(0, "a", vec![]);
        b.add_cell(0, "a", vec![]);
        assert!(matches!(b.build(), Err(ChainError::DuplicateLabel(_))));
    }

    #[test]
    fn relative_homology() {
        let d = disc();
        let rim = Subcomplex::closure_of(&d, &[(1, 0), (1, 1), (1, 2)]);
        assert_eq!(d.relative_betti_mod2(&rim), [0, 0, 1]);
        assert_eq!(d.relative_betti_mod2(&Subcomplex::empty(&d)), d.betti_mod2());

        let not_closed = Subcomplex::new(&d, vec![vec![false; 3], vec![true, false, false], vec![false]]);
        assert!(matches!(not_closed, Err(ChainError::NotBoundaryClosed { dim: 1, cell: 0, .. })));
    }

    #[test]
    fn quotient_of_square_by_half_turn() {
        let sq = square_boundary();
        // a↔c, b↔d; edges ab↔cd, bc↔da
        let rot = vec![vec![2, 3, 0, 1], vec![2, 3, 0, 1]];
        let action = CellAction::generated_by(&sq, vec![rot]).unwrap();
        assert_eq!(action.len(), 2);
        let q = quotient_by_action(&sq, &action, Representative::Lowest).unwrap();
        assert_eq!(q.complex.cell_counts(), [2, 2]);
        assert_eq!(q.complex.betti_mod2(), [1, 1]);
        let q2 = quotient_by_action(&sq, &action, Representative::Highest).unwrap();
        assert_eq!(q, q2);
    }

    #[test]
    fn trivial_action_is_identity_quotient() {
        let d = disc();
        let action = CellAction::generated_by(&d, vec![]).unwrap();
        let q = quotient_by_action(&d, &action, Representative::Lowest).unwrap();
        assert_eq!(q.complex, d);
    }

    #[test]
    fn regularity_violation_and_fallback() {
        // one edge; the flip swaps its endpoints and fixes the edge
        let mut b = CellComplex::builder();
        b.add_cell(0, "a", vec![]);
        b.add_cell(0, "b", vec![]);
        b.add_cell(1, "ab", vec![0, 1]);
        let seg = b.build().unwrap();
        let flip = CellAction::generated_by(&seg, vec![vec![vec![1, 0], vec![0]]]).unwrap();
        assert!(matches!(
            quotient_by_action(&seg, &flip, Representative::Lowest),
            Err(ChainError::RegularityViolation { dim: 1, cell: 0, .. })
        ));
        let (q, subdivided) = quotient_with_subdivision_fallback(&seg, &flip).unwrap();
        assert!(subdivided);
        assert_eq!(q.complex.cell_counts(), [2, 1]);
        assert_eq!(q.complex.betti_mod2(), [1, 0]);
    }

    #[test]
    fn non_cellular_action_rejected() {
        let sq = square_boundary();
        // swaps two opposite vertices but leaves edges alone
        let bad = vec![vec![vec![2, 1, 0, 3], vec![0, 1, 2, 3]]];
        let action = CellAction::new(&sq, bad).unwrap();
        assert!(matches!(
            quotient_by_action(&sq, &action, Representative::Lowest),
            Err(ChainError::ActionNotCellular { .. })
        ));
        assert!(CellAction::new(&sq, vec![vec![vec![0, 0, 1, 2], vec![0, 1, 2, 3]]]).is_err());
    }

    #[test]
    fn subdivision_preserves_homology() {
        let d = disc();
        let (sd, _) = d.barycentric_subdivision().unwrap();
        assert_eq!(sd.cell_counts(), [7, 12, 6]);
        assert_eq!(sd.betti_mod2(), [1, 0, 0]);
        let (sq, _) = square_boundary().barycentric_subdivision().unwrap();
        assert_eq!(sq.betti_mod2(), [1, 1]);
    }

    #[test]
    fn isomorphism_check() {
        let d = disc();
        let ident: Vec<Vec<usize>> = (0..3).map(|k| (0..d.cell_count(k)).collect()).collect();
        assert!(d.check_isomorphism(&d, &ident).is_ok());
        let mut swapped = ident.clone();
        swapped[0] = vec![1, 0, 2];
        assert!(d.check_isomorphism(&d, &swapped).is_err());
    }

    #[test]
    fn restriction_to_subcomplex() {
        let d = disc();
        let rim = Subcomplex::closure_of(&d, &[(1, 0), (1, 1), (1, 2)]);
        let c = rim.to_complex();
        assert_eq!(c.cell_counts(), [3, 3]);
        assert_eq!(c.betti_mod2(), [1, 1]);
    }
}
