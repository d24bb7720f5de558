//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use smallcover_core::charfun::{
    check_star, direct_general_position, enumerate_general_position_functionals, is_general_position,
    orientability_functional,
};
use smallcover_core::small_cover::{doubling_model, euler_characteristic_formula, SmallCoverComplex};
use smallcover_core::standard_action::{quotient_sphere_homology, stabilizer_order_formula, SignSubgroup};
use smallcover_core::{CharacteristicFunction, Gf2Vector};

use crate::acceptance;
use crate::dump::ComplexDump;
use crate::error::CliError;
use crate::fixtures;
use crate::input::{load_instance, Instance};
use crate::report::analyze;

#[derive(Debug, Parser)]
#[command(name = "smallcover", version, about = "Small covers, their index-two quotients and homology checks")]
pub struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Log progress to stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    /// Restrict selftest criteria, or fixtures for report --all and export-fixtures.
    #[arg(long, global = true, value_name = "SUBSTRING")]
    pub filter: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Fixture file or polytope file.
    pub path: Option<PathBuf>,
    /// JSON array of λ-rows, for bare polytope files.
    #[arg(long)]
    pub lambda: Option<PathBuf>,
    /// Use a bundled fixture instead of a file.
    #[arg(long, conflicts_with = "path")]
    pub fixture: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the polytope and the independence condition at every vertex.
    Validate(InputArgs),
    /// Full analysis of one fixture, or of every bundled fixture with --all.
    Report {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, conflicts_with_all = ["path", "fixture"])]
        all: bool,
    },
    /// Whether some ξ satisfies ξ(λᵢ) = 1 for every facet.
    Orientable(InputArgs),
    /// The index-two subgroup in general position, if any.
    Subtorus(InputArgs),
    /// Mod-2 homology of the small cover.
    Homology {
        #[command(flatten)]
        input: InputArgs,
        /// Print the cell complex instead.
        #[arg(long)]
        dump: bool,
    },
    /// The orbit space X/G and its filtration.
    Quotient {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        dump: bool,
    },
    /// Stabilizers of the standard action of {Π gᵢ = 1} on ℝⁿ.
    StandardAction(StandardArgs),
    /// The double of the polytope, compared with X/G when λ is given.
    Doubling {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        dump: bool,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Read fixtures from this directory instead of the bundled set.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Write the bundled fixtures as JSON files.
    ExportFixtures { dir: PathBuf },
}

#[derive(Debug, Args)]
pub struct StandardArgs {
    #[arg(long)]
    pub n: usize,
    /// Comma-separated 0-based coordinates that vanish at the point.
    #[arg(long, value_delimiter = ',')]
    pub zero_set: Option<Vec<usize>>,
    /// Comma-separated bit strings generating the subgroup, instead of a stabilizer.
    #[arg(long, value_delimiter = ',', conflicts_with = "zero_set")]
    pub generators: Option<Vec<String>>,
    #[arg(long)]
    pub check_rotations: bool,
    /// Betti numbers of the unit sphere modulo the subgroup.
    #[arg(long)]
    pub sphere_quotient: bool,
}

struct Ctx<'a> {
    json: bool,
    verbose: bool,
    filter: Option<String>,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn log(&mut self, msg: impl AsRef<str>) {
        if self.verbose {
            let _ = writeln!(self.err, "[smallcover] {}", msg.as_ref());
        }
    }

    fn emit<T: Serialize>(&mut self, value: &T, text: impl FnOnce() -> String) -> Result<(), CliError> {
        let body = if self.json {
            serde_json::to_string_pretty(value).expect("serializable")
        } else {
            text()
        };
        writeln!(self.out, "{body}").map_err(|e| CliError::io("<stdout>", e))
    }
}

/// Parses `args` (including the program name) and runs the command; returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        verbose: cli.verbose,
        filter: cli.filter.clone(),
        out,
        err,
    };
    let start = Instant::now();
    let result = dispatch(&mut ctx, cli.command);
    ctx.log(format!("finished in {:.3}s", start.elapsed().as_secs_f64()));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(ctx: &mut Ctx<'_>, command: Command) -> Result<u8, CliError> {
    match command {
        Command::Validate(input) => validate(ctx, &input),
        Command::Report { input, all } => report(ctx, &input, all),
        Command::Orientable(input) => orientable(ctx, &input),
        Command::Subtorus(input) => subtorus(ctx, &input),
        Command::Homology { input, dump } => homology(ctx, &input, dump),
        Command::Quotient { input, dump } => quotient(ctx, &input, dump),
        Command::StandardAction(args) => standard_action(ctx, &args),
        Command::Doubling { input, dump } => doubling(ctx, &input, dump),
        Command::Selftest { fixtures } => selftest(ctx, fixtures),
        Command::ExportFixtures { dir } => export(ctx, &dir),
    }
}

fn load(ctx: &mut Ctx<'_>, input: &InputArgs) -> Result<Instance, CliError> {
    let instance = match (&input.path, &input.fixture) {
        (Some(path), _) => load_instance(path, input.lambda.as_deref())?,
        (None, Some(name)) => fixtures::bundled_by_name(name)?.instance()?,
        (None, None) => return Err(CliError::Schema("give a file path or --fixture NAME".into())),
    };
    ctx.log(format!(
        "loaded {}: dim {}, {} facets, {} vertices",
        instance.name,
        instance.polytope.dim(),
        instance.polytope.facet_count(),
        instance.polytope.vertex_count()
    ));
    Ok(instance)
}

fn require_lambda(instance: &Instance) -> Result<&CharacteristicFunction, CliError> {
    instance
        .lambda
        .as_ref()
        .ok_or_else(|| CliError::Schema(format!("{}: no characteristic function (use --lambda)", instance.name)))
}

fn math<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Math(e.to_string())
}

fn validate(ctx: &mut Ctx<'_>, input: &InputArgs) -> Result<u8, CliError> {
    let instance = load(ctx, input)?;
    let summary = instance.polytope.validate().map_err(math)?;
    if let Some(lambda) = &instance.lambda {
        check_star(&instance.polytope, lambda).map_err(math)?;
    }
    let value = json!({
        "valid": true,
        "name": instance.name,
        "dim": summary.dim,
        "facets": summary.facets,
        "vertices": summary.vertices,
        "lambda_checked": instance.lambda.is_some(),
        "note": summary.note,
    });
    ctx.emit(&value, || {
        format!(
            "{}: valid (dim {}, {} facets, {} vertices{})\nnote: {}",
            instance.name,
            summary.dim,
            summary.facets,
            summary.vertices,
            if instance.lambda.is_some() { ", λ independent at every vertex" } else { "" },
            summary.note
        )
    })?;
    Ok(0)
}

fn report(ctx: &mut Ctx<'_>, input: &InputArgs, all: bool) -> Result<u8, CliError> {
    let instances = if all {
        fixtures::bundled()
            .iter()
            .filter(|f| ctx.filter.as_deref().is_none_or(|s| f.name.contains(s)))
            .map(|f| f.instance())
            .collect::<Result<Vec<_>, _>>()?
    } else {
        vec![load(ctx, input)?]
    };
    let reports = instances
        .par_iter()
        .map(analyze)
        .collect::<Result<Vec<_>, _>>()?;
    let mut failed = Vec::new();
    for r in &reports {
        // one compact object per fixture, also in text mode
        writeln!(ctx.out, "{}", r.to_json()).map_err(|e| CliError::io("<stdout>", e))?;
        if !r.all_pass() {
            failed.push(format!("{}: {}", r.name, r.failures.join("; ")));
        }
    }
    if failed.is_empty() {
        Ok(0)
    } else {
        Err(CliError::Theorem(failed.join(" | ")))
    }
}

fn orientable(ctx: &mut Ctx<'_>, input: &InputArgs) -> Result<u8, CliError> {
    let instance = load(ctx, input)?;
    let lambda = require_lambda(&instance)?;
    check_star(&instance.polytope, lambda).map_err(math)?;
    let o = orientability_functional(lambda).map_err(math)?;
    let found = (lambda.rank_n() <= 20).then(|| enumerate_general_position_functionals(lambda).len());
    let value = json!({
        "name": instance.name,
        "orientable": o.is_some(),
        "xi": o.as_ref().map(|o| o.subtorus.xi().to_bit_string()),
        "unique": o.as_ref().map(|o| o.unique),
        "functionals_found": found,
    });
    ctx.emit(&value, || match &o {
        Some(o) => format!(
            "{}: orientable, ξ = {}{}",
            instance.name,
            o.subtorus.xi(),
            if o.unique { " (unique)" } else { "" }
        ),
        None => format!("{}: not orientable, no ξ with ξ(λᵢ) = 1 for all facets", instance.name),
    })?;
    Ok(0)
}

fn subtorus(ctx: &mut Ctx<'_>, input: &InputArgs) -> Result<u8, CliError> {
    let instance = load(ctx, input)?;
    let lambda = require_lambda(&instance)?;
    check_star(&instance.polytope, lambda).map_err(math)?;
    let Some(o) = orientability_functional(lambda).map_err(math)? else {
        let value = json!({ "name": instance.name, "exists": false });
        ctx.emit(&value, || format!("{}: no index-two subgroup in general position", instance.name))?;
        return Ok(0);
    };
    let g = &o.subtorus;
    let direct = direct_general_position(&instance.polytope, lambda, g).map_err(math)?;
    let general = is_general_position(lambda, g);
    let basis: Vec<String> = g.basis().iter().map(Gf2Vector::to_bit_string).collect();
    let value = json!({
        "name": instance.name,
        "exists": true,
        "xi": g.xi().to_bit_string(),
        "unique": o.unique,
        "basis": basis,
        "general_position": general,
        "direct_general_position": direct,
    });
    ctx.emit(&value, || {
        format!(
            "{}: G = Ker {} spanned by {}; general position: {general} (weights: {direct})",
            instance.name,
            g.xi(),
            basis.join(" ")
        )
    })?;
    if general != direct {
        return Err(CliError::Theorem("the two general-position criteria disagree".into()));
    }
    Ok(0)
}

fn build(instance: &Instance) -> Result<SmallCoverComplex, CliError> {
    SmallCoverComplex::build(&instance.polytope, require_lambda(instance)?).map_err(math)
}

fn emit_dump(ctx: &mut Ctx<'_>, complex: &smallcover_core::CellComplex) -> Result<u8, CliError> {
    let dump = ComplexDump::from_complex(complex);
    let text = serde_json::to_string_pretty(&dump).expect("serializable");
    writeln!(ctx.out, "{text}").map_err(|e| CliError::io("<stdout>", e))?;
    Ok(0)
}

fn homology(ctx: &mut Ctx<'_>, input: &InputArgs, dump: bool) -> Result<u8, CliError> {
    let instance = load(ctx, input)?;
    let x = build(&instance)?;
    if dump {
        return emit_dump(ctx, x.complex());
    }
    let betti = x.betti();
    let h = instance.polytope.h_vector();
    let value = json!({
        "name": instance.name,
        "cells": x.complex().cell_counts(),
        "betti_X": betti,
        "h_vector": h,
        "euler": x.complex().euler_characteristic(),
        "euler_formula": euler_characteristic_formula(&instance.polytope),
    });
    ctx.emit(&value, || {
        format!(
            "{}: cells {:?}, betti {:?}, h-vector {:?}",
            instance.name,
            x.complex().cell_counts(),
            betti,
            h
        )
    })?;
    if !x.betti_matches_h_vector() {
        return Err(CliError::Theorem(format!("betti {betti:?} differs from h-vector {h:?}")));
    }
    Ok(0)
}

fn quotient(ctx: &mut Ctx<'_>, input: &InputArgs, dump: bool) -> Result<u8, CliError> {
    let instance = load(ctx, input)?;
    let x = build(&instance)?;
    let o = orientability_functional(x.lambda())
        .map_err(math)?
        .ok_or_else(|| CliError::Math(format!("{}: no index-two subgroup in general position", instance.name)))?;
    let q = x.orbit_space(&o.subtorus).map_err(|e| CliError::Theorem(e.to_string()))?;
    if dump {
        return emit_dump(ctx, &q.complex);
    }
    let filtration = q.filtration_checks(x.lattice());
    let betti = q.betti();
    let value = json!({
        "name": instance.name,
        "xi": o.subtorus.xi().to_bit_string(),
        "cells": q.complex.cell_counts(),
        "betti_Q": betti,
        "euler": q.complex.euler_characteristic(),
        "homology_sphere": q.is_homology_sphere(),
        "relative_betti_top": filtration.relative_top,
        "filtration_pass": filtration.pass(),
    });
    ctx.emit(&value, || {
        format!(
            "{}: Q = X/Ker {}, cells {:?}, betti {:?}, homology sphere: {}, filtration checks: {}",
            instance.name,
            o.subtorus.xi(),
            q.complex.cell_counts(),
            betti,
            q.is_homology_sphere(),
            if filtration.pass() { "pass" } else { "FAIL" }
        )
    })?;
    if !q.is_homology_sphere() || !filtration.pass() {
        return Err(CliError::Theorem(format!(
            "quotient betti {betti:?}; {}",
            filtration.failures.join("; ")
        )));
    }
    Ok(0)
}

fn standard_action(ctx: &mut Ctx<'_>, args: &StandardArgs) -> Result<u8, CliError> {
    let n = args.n;
    let g = SignSubgroup::standard(n).map_err(math)?;
    let (h, formula) = match (&args.zero_set, &args.generators) {
        (Some(zero_set), _) => {
            let h = g.stabilizer(zero_set).map_err(math)?;
            let k = zero_set.iter().collect::<std::collections::BTreeSet<_>>().len() as u64;
            (h, Some(stabilizer_order_formula(k)))
        }
        (None, Some(gens)) => {
            let vectors = gens
                .iter()
                .map(|s| Gf2Vector::parse(s).map_err(|e| CliError::Schema(format!("generator {s:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            (SignSubgroup::from_generators(n, &vectors).map_err(math)?, None)
        }
        (None, None) => (g, None),
    };
    let rotation_generated = args.check_rotations.then(|| h.is_generated_by_rotations());
    let betti = if args.sphere_quotient {
        Some(quotient_sphere_homology(n, &h).map_err(math)?)
    } else {
        None
    };
    let elements: Option<Vec<String>> = (h.rank() <= 10).then(|| h.elements().iter().map(Gf2Vector::to_bit_string).collect());
    let value = json!({
        "n": n,
        "order": h.order() as u64,
        "formula_order": formula,
        "elements": elements,
        "rotation_generated": rotation_generated,
        "betti": betti,
    });
    ctx.emit(&value, || {
        let mut lines = vec![format!("order {}", h.order())];
        if let Some(f) = formula {
            lines.push(format!("even subsets of the zero set: {f}"));
        }
        if let Some(r) = rotation_generated {
            lines.push(format!("generated by rotations: {r}"));
        }
        if let Some(b) = &betti {
            lines.push(format!("sphere quotient betti: {b:?}"));
        }
        lines.join("\n")
    })?;
    Ok(0)
}

fn doubling(ctx: &mut Ctx<'_>, input: &InputArgs, dump: bool) -> Result<u8, CliError> {
    let instance = load(ctx, input)?;
    instance.polytope.validate().map_err(math)?;
    let model = doubling_model(&instance.polytope).map_err(math)?;
    if dump {
        return emit_dump(ctx, &model);
    }
    let isomorphic = match &instance.lambda {
        Some(lambda) => match orientability_functional(lambda).map_err(math)? {
            Some(o) => {
                let x = SmallCoverComplex::build(&instance.polytope, lambda).map_err(math)?;
                let q = x.orbit_space(&o.subtorus).map_err(|e| CliError::Theorem(e.to_string()))?;
                Some(q.doubling_isomorphism(&instance.polytope, x.lattice()).map_err(|e| e.to_string()))
            }
            None => None,
        },
        None => None,
    };
    let value = json!({
        "name": instance.name,
        "cells": model.cell_counts(),
        "betti": model.betti_mod2(),
        "isomorphic_to_quotient": isomorphic.as_ref().map(Result::is_ok),
    });
    ctx.emit(&value, || {
        let iso = match &isomorphic {
            Some(Ok(())) => "isomorphic to X/G".to_owned(),
            Some(Err(e)) => format!("NOT isomorphic to X/G: {e}"),
            None => "no quotient to compare".to_owned(),
        };
        format!(
            "{}: double has cells {:?}, betti {:?}; {iso}",
            instance.name,
            model.cell_counts(),
            model.betti_mod2()
        )
    })?;
    match isomorphic {
        Some(Err(e)) => Err(CliError::Theorem(e)),
        _ => Ok(0),
    }
}

fn selftest(ctx: &mut Ctx<'_>, dir: Option<PathBuf>) -> Result<u8, CliError> {
    let fixtures = match &dir {
        Some(d) => fixtures::load_dir(d)?,
        None => fixtures::bundled(),
    };
    ctx.log(format!("{} fixtures", fixtures.len()));
    let results = acceptance::run(fixtures, ctx.filter.as_deref());
    if results.is_empty() {
        return Err(CliError::Schema(format!("no criterion matches {:?}", ctx.filter)));
    }
    if ctx.json {
        let rows: Vec<_> = results
            .iter()
            .map(|r| json!({ "id": r.id, "name": r.name, "pass": r.pass, "detail": r.detail }))
            .collect();
        ctx.emit(&rows, String::new)?;
    } else {
        for r in &results {
            writeln!(ctx.out, "{}", r.line()).map_err(|e| CliError::io("<stdout>", e))?;
        }
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.pass).map(|r| format!("{} {}", r.id, r.name)).collect();
    if failed.is_empty() {
        Ok(0)
    } else {
        Err(CliError::Theorem(format!("failing criteria: {}", failed.join(", "))))
    }
}

fn export(ctx: &mut Ctx<'_>, dir: &std::path::Path) -> Result<u8, CliError> {
    let written = fixtures::export(dir, ctx.filter.as_deref())?;
    ctx.emit(&written, || written.join("\n"))?;
    Ok(0)
}
