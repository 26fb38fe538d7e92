//! One function per subcommand, each filling in a [`Report`].

use std::sync::Arc;

use num_traits::ToPrimitive;
use plumbing_core::generic::{chi_sheaf, pg_generic};
use plumbing_core::opt::{laufer_zmin, min_chi_positive, numerically_gorenstein, Classification};
use plumbing_core::relative::{
    eca_dims, elliptic_dominance_check, h0_relative_bundle, h1_natural, h1_relative_bundle, pg_relgen,
    relative_dominant, relatively_rational, relgen_natural, san_member,
};
use plumbing_core::{ChernClass, Cycle, Lattice, LatticeError, SearchOptions};
use serde_json::{json, Value};

use crate::args::{BundleArgs, ChernArgs, GlobalArgs, HypothesisArg, SubArgs};
use crate::error::CliError;
use crate::input::{self, Source, Structure};
use crate::report::{self, Report};

pub struct Context<'a> {
    pub global: &'a GlobalArgs,
    pub opts: SearchOptions,
}

impl Context<'_> {
    /// Loads the graph and records it in the report.
    fn load(&self, report: &mut Report, spec: &str) -> Result<Source, CliError> {
        report.arg("graph", spec);
        if spec.starts_with("random:") {
            report.arg("seed", self.global.seed);
        }
        if let Some(limit) = self.global.max_box {
            report.arg("max_box", limit);
        }
        let source = Source::load(spec, self.global.seed)?;
        report.input = Some((source.name.clone(), source.digest()));
        Ok(source)
    }

    fn lattice(&self, report: &mut Report, spec: &str) -> Result<Arc<Lattice>, CliError> {
        let source = self.load(report, spec)?;
        input::lattice(&source)
    }
}

fn echo_chern(report: &mut Report, chern: &ChernArgs) {
    if let Some(s) = &chern.chern_estar {
        report.arg("chern_estar", s.as_str());
    }
    if let Some(s) = &chern.chern_e {
        report.arg("chern_e", s.as_str());
    }
}

fn echo_sub(report: &mut Report, sub: &SubArgs) {
    if let Some(s) = &sub.subgraph {
        report.arg("subgraph", s.as_str());
    }
    if let Some(p) = &sub.tower {
        report.arg("tower", p.display().to_string());
    }
    if let Some(j) = sub.layer {
        report.arg("layer", j);
    }
    if let Some(p) = &sub.oracle {
        report.arg("oracle", p.display().to_string());
    }
}

fn structure_json(lat: &Lattice, s: &Structure) -> Value {
    match s {
        Structure::Generic => json!({ "kind": "generic" }),
        Structure::Subgraph { sub } => json!({
            "kind": "subgraph",
            "v1": report::ids(lat, &sub.v1),
            "oracle": sub.oracle.kind().label(),
        }),
        Structure::Tower { tower, layer, sub } => json!({
            "kind": "tower",
            "layers": tower.layers().iter().map(|w| report::ids(lat, w)).collect::<Vec<_>>(),
            "layer": layer,
            "v1": report::ids(lat, &sub.v1),
            "oracle": sub.oracle.kind().label(),
        }),
    }
}

fn min_chi(value: &num_rational::BigRational) -> i64 {
    value.to_integer().to_i64().expect("χ fits i64")
}

pub fn validate(ctx: &Context, spec: &str) -> Result<Report, CliError> {
    let mut report = Report::new("validate");
    let source = ctx.load(&mut report, spec)?;
    let verdict = match source.graph() {
        Err(e @ plumbing_core::GraphError::Syntax { .. }) => return Err(e.into()),
        Err(e) => Err(e.to_string()),
        Ok(g) => match Lattice::new(&g) {
            Ok(lat) => Ok((g.len(), g.edges().len(), lat.det_h().clone())),
            Err(e @ LatticeError::NotNegativeDefinite { .. }) => Err(e.to_string()),
            Err(e) => return Err(e.into()),
        },
    };
    report.results = match verdict {
        Ok((vertices, edges, det)) => {
            json!({ "valid": true, "vertices": vertices, "edges": edges, "detH": report::integer(&det) })
        }
        Err(reason) => {
            report.negative = true;
            json!({ "valid": false, "reason": reason })
        }
    };
    Ok(report)
}

pub fn invariants(ctx: &Context, spec: &str) -> Result<Report, CliError> {
    let mut report = Report::new("invariants");
    let lat = ctx.lattice(&mut report, spec)?;
    let zk: serde_json::Map<String, Value> = lat
        .ids()
        .iter()
        .cloned()
        .zip(lat.zk().iter().map(|q| plumbing_core::lattice::fmt_rational(q).into()))
        .collect();
    let zmin = laufer_zmin(&lat)?;
    let positive = min_chi_positive(&lat, &ctx.opts)?;
    let min = min_chi(&positive.result.value);
    report.explored = Some(positive.result.explored);
    report.results = json!({
        "vertices": lat.len(),
        "detH": report::integer(lat.det_h()),
        "zk": zk,
        "numerically_gorenstein": numerically_gorenstein(&lat),
        "zmin": report::cycle(&lat, &zmin.terminal),
        "zmin_chi": lat.chi_cycle(&zmin.terminal),
        "laufer_steps": zmin.steps.len(),
        "min_chi": min,
        "classify": Classification::from_min(min).label(),
        "pg_generic": 1 - min,
    });
    Ok(report)
}

pub fn classify_cmd(ctx: &Context, spec: &str) -> Result<Report, CliError> {
    let mut report = Report::new("classify");
    let lat = ctx.lattice(&mut report, spec)?;
    let positive = min_chi_positive(&lat, &ctx.opts)?;
    let min = min_chi(&positive.result.value);
    report.explored = Some(positive.result.explored);
    report.results = json!({
        "classify": Classification::from_min(min).label(),
        "min_chi": min,
        "argmin": report::cycle(&lat, &positive.result.argmin),
        "certificate": report::cycle(&lat, &positive.certificate),
    });
    Ok(report)
}

pub fn pg(ctx: &Context, spec: &str, sub_args: &SubArgs) -> Result<Report, CliError> {
    let mut report = Report::new("pg");
    let lat = ctx.lattice(&mut report, spec)?;
    echo_sub(&mut report, sub_args);
    let structure = Structure::resolve(&lat, sub_args)?;
    let pg_gen = pg_generic(&lat, &ctx.opts)?;
    let mut results = json!({ "structure": structure_json(&lat, &structure), "pg_generic": pg_gen });
    match &structure {
        Structure::Generic => results["pg"] = pg_gen.into(),
        s => {
            let st = pg_relgen(&lat, &s.sub(lat.len()), &ctx.opts)?;
            results["pg"] = st.value.into();
            results["cycle"] = report::cycle(&lat, &st.cycle);
            results["doublings"] = st.doublings.into();
        }
    }
    report.results = results;
    Ok(report)
}

struct Bundle {
    lat: Arc<Lattice>,
    z: Cycle,
    l: ChernClass,
    structure: Structure,
}

fn bundle(ctx: &Context, report: &mut Report, args: &BundleArgs) -> Result<Bundle, CliError> {
    let lat = ctx.lattice(report, &args.graph)?;
    report.arg("cycle", args.cycle.as_str());
    echo_chern(report, &args.chern);
    echo_sub(report, &args.sub);
    let z = input::cycle(&lat, &args.cycle)?;
    let l = input::chern(&lat, &args.chern)?;
    let structure = Structure::resolve(&lat, &args.sub)?;
    Ok(Bundle { lat, z, l, structure })
}

pub fn h1(ctx: &Context, args: &BundleArgs, hypothesis: HypothesisArg) -> Result<Report, CliError> {
    let mut report = Report::new("h1");
    let b = bundle(ctx, &mut report, args)?;
    if matches!(b.structure, Structure::Tower { .. }) {
        report.arg("hypothesis", if hypothesis == HypothesisArg::Positive { "positive" } else { "nonzero" });
    }
    let lat = &b.lat;
    let sub = b.structure.sub(lat.len());
    let (h1, argmin, dominance, unchecked, explored) = match &b.structure {
        Structure::Tower { tower, layer, .. } => {
            let r = relgen_natural(lat, &b.z, &b.l, tower, *layer, hypothesis.into(), &ctx.opts)?;
            let explored = r.dominance.explored;
            (r.h1, r.argmin, r.dominance, r.substitution_unchecked, explored)
        }
        _ => {
            let r = h1_relative_bundle(lat, &b.z, &b.l, &sub, &ctx.opts)?;
            let d = relative_dominant(lat, &b.z, &b.l, &sub, &ctx.opts)?;
            (r.h1, r.argmin, d, r.substitution_unchecked, r.explored)
        }
    };
    let h0 = h0_relative_bundle(lat, &b.z, &b.l, &sub, &ctx.opts)?;
    let eca = eca_dims(lat, &b.z, &b.l, &sub, &ctx.opts)?;
    report.explored = Some(explored);
    report.results = json!({
        "structure": structure_json(lat, &b.structure),
        "chern": report::class(lat, &b.l),
        "realizable": lat.lipman_contains(&b.l.neg()),
        "h1": h1,
        "argmin": report::cycle(lat, &argmin),
        "h0": h0,
        "chi": chi_sheaf(lat, &b.z, &b.l),
        "dominance": report::dominance(lat, &dominance),
        "eca": { "eca": eca.eca, "eca_rel": eca.eca_rel, "fiber": eca.fiber, "nonempty": eca.nonempty },
        "substitution_unchecked": unchecked,
    });
    Ok(report)
}

pub fn h0(ctx: &Context, args: &BundleArgs) -> Result<Report, CliError> {
    let mut report = Report::new("h0");
    let b = bundle(ctx, &mut report, args)?;
    let sub = b.structure.sub(b.lat.len());
    let h0 = h0_relative_bundle(&b.lat, &b.z, &b.l, &sub, &ctx.opts)?;
    let h1 = h1_relative_bundle(&b.lat, &b.z, &b.l, &sub, &ctx.opts)?;
    report.explored = Some(h1.explored);
    report.results = json!({
        "structure": structure_json(&b.lat, &b.structure),
        "h0": h0,
        "chi": chi_sheaf(&b.lat, &b.z, &b.l),
        "h1": h1.h1,
    });
    Ok(report)
}

pub fn dominant(ctx: &Context, args: &BundleArgs) -> Result<Report, CliError> {
    let mut report = Report::new("dominant");
    let b = bundle(ctx, &mut report, args)?;
    let d = relative_dominant(&b.lat, &b.z, &b.l, &b.structure.sub(b.lat.len()), &ctx.opts)?;
    report.negative = !d.dominant;
    report.explored = Some(d.explored);
    let mut results = report::dominance(&b.lat, &d);
    results["structure"] = structure_json(&b.lat, &b.structure);
    report.results = results;
    Ok(report)
}

pub fn eca(ctx: &Context, args: &BundleArgs) -> Result<Report, CliError> {
    let mut report = Report::new("eca");
    let b = bundle(ctx, &mut report, args)?;
    let e = eca_dims(&b.lat, &b.z, &b.l, &b.structure.sub(b.lat.len()), &ctx.opts)?;
    report.results = json!({
        "structure": structure_json(&b.lat, &b.structure),
        "eca": e.eca,
        "eca_rel": e.eca_rel,
        "fiber": e.fiber,
        "nonempty": e.nonempty,
    });
    Ok(report)
}

pub fn rational(ctx: &Context, spec: &str, cycle: &str, sub_args: &SubArgs) -> Result<Report, CliError> {
    let mut report = Report::new("rational");
    let lat = ctx.lattice(&mut report, spec)?;
    report.arg("cycle", cycle);
    echo_sub(&mut report, sub_args);
    let z = input::cycle(&lat, cycle)?;
    let structure = Structure::resolve(&lat, sub_args)?;
    let d = relatively_rational(&lat, &z, &structure.sub(lat.len()), &ctx.opts)?;
    report.negative = !d.dominant;
    report.explored = Some(d.explored);
    report.results = json!({
        "structure": structure_json(&lat, &structure),
        "relatively_rational": d.dominant,
        "margin": d.margin,
        "witness": report::opt_cycle(&lat, d.witness.as_ref()),
    });
    Ok(report)
}

pub fn semigroup(ctx: &Context, spec: &str, chern: &ChernArgs, sub_args: &SubArgs) -> Result<Report, CliError> {
    let mut report = Report::new("semigroup");
    let lat = ctx.lattice(&mut report, spec)?;
    echo_chern(&mut report, chern);
    echo_sub(&mut report, sub_args);
    let l = input::chern(&lat, chern)?;
    let structure = Structure::resolve(&lat, sub_args)?;
    let m = san_member(&lat, &l, &structure.sub(lat.len()), &ctx.opts)?;
    report.negative = !m.member;
    let mut results = json!({
        "structure": structure_json(&lat, &structure),
        "chern": report::class(&lat, &l),
        "member": m.member,
        "reason": m.reason.label(),
    });
    if let Some(d) = &m.dominance {
        report.explored = Some(d.value.explored);
        let mut dj = report::dominance(&lat, &d.value);
        dj["cycle"] = report::cycle(&lat, &d.cycle);
        dj["doublings"] = d.doublings.into();
        results["dominance"] = dj;
    }
    report.results = results;
    Ok(report)
}

pub fn natural(ctx: &Context, spec: &str, chern: &ChernArgs, sub_args: &SubArgs) -> Result<Report, CliError> {
    let mut report = Report::new("natural");
    let lat = ctx.lattice(&mut report, spec)?;
    echo_chern(&mut report, chern);
    echo_sub(&mut report, sub_args);
    let l = input::chern(&lat, chern)?;
    let structure = Structure::resolve(&lat, sub_args)?;
    let r = h1_natural(&lat, &l, &structure.sub(lat.len()), &ctx.opts)?;
    report.results = json!({
        "structure": structure_json(&lat, &structure),
        "chern": report::class(&lat, &l),
        "h1": r.h1,
        "direct": r.direct,
        "correction": r.correction,
        "via_saturation": r.via_saturation,
        "saturation": report::cycle(&lat, &r.saturation),
        "cycle": report::cycle(&lat, &r.cycle),
    });
    Ok(report)
}

pub fn elliptic_lemma(
    ctx: &Context,
    spec: &str,
    vertex: &str,
    n_max: u32,
    sub_args: &SubArgs,
) -> Result<Report, CliError> {
    let mut report = Report::new("elliptic-lemma");
    let lat = ctx.lattice(&mut report, spec)?;
    report.arg("vertex", vertex);
    report.arg("n_max", n_max);
    echo_sub(&mut report, sub_args);
    let v = lat.index_of(vertex)?;
    let structure = Structure::resolve(&lat, sub_args)?;
    let r = elliptic_dominance_check(&lat, v, n_max, &structure.sub(lat.len()), &ctx.opts)?;
    report.negative = !r.pass;
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "n": row.n,
                "dominant": row.dominant,
                "margin": row.margin,
                "witness": report::opt_cycle(&lat, row.witness.as_ref()),
                "cycle": report::cycle(&lat, &row.cycle),
            })
        })
        .collect();
    report.results = json!({ "structure": structure_json(&lat, &structure), "rows": rows, "pass": r.pass });
    Ok(report)
}
