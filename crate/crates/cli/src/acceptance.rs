//! The acceptance suite: eleven criteria run over a fixture set plus seeded
//! random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use smallcover_core::charfun::check_star;
use smallcover_core::gf2::all_vectors;
use smallcover_core::small_cover::{doubling_model, SmallCoverComplex};
use smallcover_core::standard_action::{
    cross_polytope_sphere, quotient_sphere_homology, sphere_betti, stabilizer_order_formula, weak_equivalence_iso,
    SignSubgroup,
};
use smallcover_core::{CharacteristicFunction, Gf2Matrix, Gf2Vector, SimplePolytope};

use crate::input::{FixtureFile, Instance};
use crate::report::{analyze, Report};

const SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} {:<26} {}  {}",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

type Check = fn(&Context) -> Result<String, String>;

pub const CRITERIA: &[(&str, &str, Check)] = &[
    ("C01", "sphere-quotient", sphere_quotient),
    ("C02", "uniqueness", uniqueness),
    ("C03", "orientability-parity", orientability_parity),
    ("C04", "formality-count", formality_count),
    ("C05", "betti-equals-h-vector", betti_equals_h),
    ("C06", "stabilizer-arithmetic", stabilizer_arithmetic),
    ("C07", "rotation-sphere-quotient", rotation_criterion),
    ("C08", "weak-equivalence", weak_equivalence),
    ("C09", "doubling-model", doubling),
    ("C10", "filtration-vanishing", filtration),
    ("C11", "infrastructure", infrastructure),
];

/// Fixtures with their analyses, shared by every criterion.
pub struct Context {
    fixtures: Vec<(FixtureFile, Result<(Instance, Report), String>)>,
}

impl Context {
    pub fn new(fixtures: Vec<FixtureFile>) -> Self {
        let fixtures = fixtures
            .into_par_iter()
            .map(|f| {
                let analysed = f
                    .instance()
                    .and_then(|i| analyze(&i).map(|r| (i, r)))
                    .map_err(|e| e.to_string());
                (f, analysed)
            })
            .collect();
        Self { fixtures }
    }

    fn analysed(&self) -> Result<Vec<(&Instance, &Report)>, String> {
        self.fixtures
            .iter()
            .map(|(f, r)| r.as_ref().map(|(i, r)| (i, r)).map_err(|e| format!("{}: {e}", f.name)))
            .collect()
    }

    fn named(&self, name: &str) -> Result<(&Instance, &Report), String> {
        self.analysed()?
            .into_iter()
            .find(|(i, _)| i.name == name)
            .ok_or_else(|| format!("fixture {name} is missing"))
    }
}

/// Runs the criteria whose id or name contains `filter` (case-insensitive).
pub fn run(fixtures: Vec<FixtureFile>, filter: Option<&str>) -> Vec<CriterionResult> {
    let filter = filter.map(str::to_lowercase);
    let selected: Vec<_> = CRITERIA
        .iter()
        .filter(|(id, name, _)| {
            filter
                .as_deref()
                .is_none_or(|f| id.to_lowercase().contains(f) || name.contains(f))
        })
        .collect();
    let ctx = Context::new(fixtures);
    selected
        .par_iter()
        .map(|(id, name, check)| {
            let (pass, detail) = match check(&ctx) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CriterionResult { id, name, pass, detail }
        })
        .collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn expected_matches(i: &Instance, r: &Report) -> Result<(), String> {
    let Some(e) = &i.expected else { return Ok(()) };
    if let Some(o) = e.orientable {
        ensure(o == r.orientable, || format!("{}: orientable {} but expected {o}", i.name, r.orientable))?;
    }
    if let Some(b) = &e.betti_x {
        ensure(*b == r.betti_x, || format!("{}: betti_X {:?} but expected {b:?}", i.name, r.betti_x))?;
    }
    if let Some(b) = &e.betti_q {
        ensure(Some(b) == r.betti_q.as_ref(), || {
            format!("{}: betti_Q {:?} but expected {b:?}", i.name, r.betti_q)
        })?;
    }
    Ok(())
}

fn sphere_quotient(ctx: &Context) -> Result<String, String> {
    for name in ["T2", "T3", "T4", "RP3", "M2-hexagon"] {
        let (_, r) = ctx.named(name)?;
        ensure(r.orientable, || format!("{name} should be orientable"))?;
    }
    let (_, pentagon) = ctx.named("pentagon-3coloring")?;
    ensure(!pentagon.orientable, || "pentagon 3-coloring should be non-orientable".into())?;
    let mut spheres = 0;
    for (i, r) in ctx.analysed()? {
        expected_matches(i, r)?;
        if r.orientable {
            let n = r.dim;
            let want = sphere_betti(n);
            ensure(r.betti_q.as_ref() == Some(&want), || {
                format!("{}: betti_Q {:?}, sphere has {want:?}", i.name, r.betti_q)
            })?;
            let chi = 1 + if n % 2 == 0 { 1 } else { -1 };
            ensure(r.euler_q == Some(chi), || format!("{}: euler characteristic {:?}", i.name, r.euler_q))?;
            spheres += 1;
        } else {
            ensure(r.betti_q.is_none(), || format!("{}: quotient computed without a subgroup", i.name))?;
        }
    }
    Ok(format!("{spheres} orientable fixtures give homology spheres"))
}

fn uniqueness(ctx: &Context) -> Result<String, String> {
    for name in ["RP2", "RP4", "pentagon-3coloring"] {
        let (_, r) = ctx.named(name)?;
        ensure(r.functionals_found == Some(0), || format!("{name}: {:?} functionals", r.functionals_found))?;
    }
    let mut checked = 0;
    for (i, r) in ctx.analysed()? {
        let want = usize::from(r.orientable);
        ensure(r.functionals_found == Some(want), || {
            format!("{}: {:?} functionals found, expected {want}", i.name, r.functionals_found)
        })?;
        if let Some(o) = i.expected.as_ref().and_then(|e| e.orientable) {
            ensure(o == r.orientable, || format!("{}: orientability differs from fixture", i.name))?;
        }
        checked += 1;
    }
    Ok(format!("exhaustive search over {checked} fixtures"))
}

fn orientability_parity(ctx: &Context) -> Result<String, String> {
    for n in 1..=6 {
        let (_, r) = ctx.named(&format!("RP{n}"))?;
        ensure(r.orientable == (n % 2 == 1), || format!("RP{n}: orientable = {}", r.orientable))?;
    }
    Ok("RP1..RP6 orientable exactly for odd n".into())
}

/// A random characteristic function on an `m`-gon: consecutive edges get
/// distinct nonzero vectors of Z₂².
fn random_polygon_cover(rng: &mut ChaCha8Rng) -> (SimplePolytope, CharacteristicFunction) {
    let m = rng.gen_range(3..=8);
    loop {
        let colors: Vec<u64> = (0..m).map(|_| rng.gen_range(1..4)).collect();
        if (0..m).all(|i| colors[i] != colors[(i + 1) % m]) {
            let rows = colors.iter().map(|&c| Gf2Vector::from_mask(2, c)).collect();
            let lambda = CharacteristicFunction::new(Gf2Matrix::from_rows(2, rows).expect("width 2"));
            return (SimplePolytope::polygon(m).expect("m >= 3"), lambda);
        }
    }
}

fn formality_count(ctx: &Context) -> Result<String, String> {
    let analysed = ctx.analysed()?;
    for (i, r) in &analysed {
        let sum: usize = r.betti_x.iter().sum();
        ensure(sum == r.vertices, || format!("{}: betti sum {sum} vs {} vertices", i.name, r.vertices))?;
        if r.orientable {
            ensure(r.formality_pass == Some(true), || format!("{}: fixed set and X have different betti sums", i.name))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let covers: Vec<_> = (0..50).map(|_| random_polygon_cover(&mut rng)).collect();
    covers
        .par_iter()
        .enumerate()
        .map(|(k, (p, lambda))| {
            let x = SmallCoverComplex::build(p, lambda).map_err(|e| format!("random cover {k}: {e}"))?;
            let sum: usize = x.betti().iter().sum();
            ensure(sum == p.vertex_count(), || {
                format!("random {}-gon cover {k}: betti sum {sum}", p.vertex_count())
            })
        })
        .collect::<Result<Vec<()>, String>>()?;
    Ok(format!("{} fixtures and 50 random polygon covers", analysed.len()))
}

fn betti_equals_h(ctx: &Context) -> Result<String, String> {
    let analysed = ctx.analysed()?;
    for (i, r) in &analysed {
        let matches = r.betti_x.len() == r.h_vector.len()
            && r.betti_x.iter().zip(&r.h_vector).all(|(&b, &h)| b as i64 == h);
        ensure(matches, || format!("{}: betti {:?} vs h {:?}", i.name, r.betti_x, r.h_vector))?;
        if let Some(b) = i.expected.as_ref().and_then(|e| e.betti_x.as_ref()) {
            ensure(*b == r.betti_x, || format!("{}: betti_X {:?} but expected {b:?}", i.name, r.betti_x))?;
        }
    }
    Ok(format!("{} fixtures", analysed.len()))
}

fn stabilizer_arithmetic(_: &Context) -> Result<String, String> {
    let n = 12;
    let g = SignSubgroup::standard(n).map_err(|e| e.to_string())?;
    for k in 1..=12u64 {
        let formula = stabilizer_order_formula(k);
        ensure(formula == 1 << (k - 1), || format!("k = {k}: binomial sum {formula}"))?;
        let zero_set: Vec<usize> = (0..k as usize).collect();
        let outside = Gf2Vector::from_bits(&(0..n).map(|i| i >= k as usize).collect::<Vec<_>>());
        let enumerated = all_vectors(n)
            .filter(|v| v.and(&outside).is_zero() && g.contains(v))
            .count() as u64;
        let order = g.stabilizer(&zero_set).map_err(|e| e.to_string())?.order();
        ensure(enumerated == formula && order == u128::from(formula), || {
            format!("k = {k}: formula {formula}, enumerated {enumerated}, stabilizer {order}")
        })?;
    }
    Ok("k = 1..12".into())
}

fn rotation_criterion(_: &Context) -> Result<String, String> {
    let mut count = 0;
    for n in 1..=5usize {
        let g = SignSubgroup::standard(n).map_err(|e| e.to_string())?;
        for mask in 0u64..(1 << n) {
            let zero_set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let h = g.stabilizer(&zero_set).map_err(|e| e.to_string())?;
            ensure(h.is_generated_by_rotations(), || {
                format!("n = {n}, zero set {zero_set:?}: not generated by rotations")
            })?;
            let betti = quotient_sphere_homology(n, &h).map_err(|e| e.to_string())?;
            ensure(betti == sphere_betti(n - 1), || {
                format!("n = {n}, zero set {zero_set:?}: quotient betti {betti:?}")
            })?;
            count += 1;
        }
    }
    let diag = SignSubgroup::from_generators(4, &[Gf2Vector::ones(4)]).map_err(|e| e.to_string())?;
    ensure(!diag.is_generated_by_rotations(), || "{0000,1111} reported rotation-generated".into())?;
    let betti = quotient_sphere_homology(4, &diag).map_err(|e| e.to_string())?;
    ensure(betti == [1, 1, 1, 1], || format!("{{0000,1111}} control gives {betti:?}"))?;
    Ok(format!("{count} stabilizers; control gives (1,1,1,1)"))
}

/// Weights `αᵢ = A·eᵢ` (`i < n`) and `αₙ = A·(1,…,1)` for a random invertible
/// `A`, listed in random order.
fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Gf2Vector> {
    let k = n - 1;
    let a = loop {
        let rows = (0..k).map(|_| Gf2Vector::from_mask(k, rng.gen_range(0..1u64 << k))).collect();
        let a = Gf2Matrix::from_rows(k, rows).expect("width k");
        if a.rank() == k {
            break a;
        }
    };
    let mut weights: Vec<Gf2Vector> = (0..k)
        .map(|i| a.mul_vec(&Gf2Vector::unit(k, i)).expect("length k"))
        .collect();
    weights.push(a.mul_vec(&Gf2Vector::ones(k)).expect("length k"));
    weights.shuffle(rng);
    weights
}

fn weak_equivalence(_: &Context) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    for trial in 0..100 {
        let n = rng.gen_range(2..=6);
        let weights = random_weights(&mut rng, n);
        let phi = weak_equivalence_iso(&weights).map_err(|e| format!("trial {trial}: {e}"))?;
        let mut image: Vec<Gf2Vector> = all_vectors(n - 1).map(|t| phi.apply(&t)).collect();
        let mut standard = SignSubgroup::standard(n).map_err(|e| e.to_string())?.elements();
        image.sort();
        standard.sort();
        ensure(image == standard, || format!("trial {trial} (n = {n}): image differs from the standard subgroup"))?;
    }
    Ok("100 random weight systems, n <= 6".into())
}

fn doubling(ctx: &Context) -> Result<String, String> {
    let mut count = 0;
    for (i, r) in ctx.analysed()? {
        if r.orientable {
            ensure(r.doubling_isomorphic == Some(true), || format!("{}: not isomorphic to the double", i.name))?;
            count += 1;
        }
    }
    Ok(format!("{count} orientable fixtures"))
}

fn filtration(ctx: &Context) -> Result<String, String> {
    let mut count = 0;
    for (i, r) in ctx.analysed()? {
        if r.orientable {
            ensure(r.filtration_pass == Some(true), || {
                format!("{}: {}", i.name, r.failures.join("; "))
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} orientable fixtures"))
}

fn infrastructure(ctx: &Context) -> Result<String, String> {
    let analysed = ctx.analysed()?;
    for (i, r) in &analysed {
        ensure(r.checks.get("boundary_squared") == Some(&true), || format!("{}: ∂² ≠ 0", i.name))?;
        if r.orientable {
            ensure(r.checks.get("representative_independent") == Some(&true), || {
                format!("{}: quotient depends on representatives", i.name)
            })?;
        }
        let again = analyze(i).map_err(|e| e.to_string())?;
        ensure(again.to_json() == r.to_json(), || format!("{}: report differs between runs", i.name))?;
        let model = doubling_model(&i.polytope).map_err(|e| e.to_string())?;
        ensure(model.check_boundary_squared().is_ok(), || format!("{}: doubling model ∂² ≠ 0", i.name))?;
    }
    for n in 1..=5 {
        let s = cross_polytope_sphere(n).map_err(|e| e.to_string())?;
        ensure(s.complex.check_boundary_squared().is_ok(), || format!("cross-polytope n = {n}: ∂² ≠ 0"))?;
    }
    let (p, lambda) = random_polygon_cover(&mut ChaCha8Rng::seed_from_u64(SEED));
    ensure(check_star(&p, &lambda).is_ok(), || "random cover fails independence".into())?;
    Ok(format!("{} fixtures, reports byte-identical", analysed.len()))
}
