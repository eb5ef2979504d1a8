use std::collections::BTreeMap;
use std::fmt::Write as _;

use khovanov::flow::{FaceReport, PairReport};
use khovanov::{
    chain_homology, cube_flow_category, d_squared_from_boundary, differential, face_poset, floer_complex,
    generators as all_generators, homology as kh, jones as kh_jones, kauffman_jones, khovanov_skeleton,
    parse_pd, verify_face_axioms, FlowCategorySkeleton, Group, LaurentPolynomial,
};
use serde::Serialize;
use serde_json::json;

use crate::{Failure, Output};

/// Largest cube whose strata are enumerated in full.
const FULL_ENUMERATION: usize = 6;
/// Index difference up to which face axioms are checked on larger cubes.
const AXIOM_DEPTH: usize = 3;

fn ok(text: String, json: serde_json::Value) -> Result<Output, Failure> {
    Ok(Output {
        text,
        json,
        verdict: None,
    })
}

#[derive(Serialize)]
struct DegreeGroup {
    degree: i64,
    free_rank: usize,
    torsion: Vec<String>,
}

fn degree_groups(h: &BTreeMap<i64, Group>) -> Vec<DegreeGroup> {
    h.iter()
        .map(|(&degree, g)| DegreeGroup {
            degree,
            free_rank: g.free_rank,
            torsion: g.torsion.iter().map(|t| t.to_string()).collect(),
        })
        .collect()
}

pub fn homology(text: &str, cap: usize) -> Result<Output, Failure> {
    let d = parse_pd(text)?;
    let table = kh(&differential(&d, cap)?)?;
    let mut out = format!(
        "{}\nn+ = {}, n- = {}\n\n",
        describe(&d.to_pd_string()),
        d.n_plus(),
        d.n_minus()
    );
    out.push_str(&table.render());
    ok(
        out,
        json!({
            "schema": "khovanov-homology/1",
            "pd": d.to_pd_string(),
            "crossings": d.crossing_count(),
            "n_plus": d.n_plus(),
            "n_minus": d.n_minus(),
            "groups": table,
        }),
    )
}

fn describe(pd: &str) -> String {
    if pd.is_empty() {
        "diagram: (empty)".into()
    } else {
        format!("diagram: {pd}")
    }
}

pub fn jones(text: &str, cap: usize, oracle: bool) -> Result<Output, Failure> {
    let d = parse_pd(text)?;
    let v = kh_jones(&d, cap)?;
    if !oracle {
        return ok(
            format!("{v}\n"),
            json!({"schema": "khovanov-jones/1", "pd": d.to_pd_string(), "jones": v}),
        );
    }
    let k = kauffman_jones(&d, cap)?;
    Ok(compare_routes(d.to_pd_string(), v, k))
}

fn compare_routes(pd: String, v: LaurentPolynomial, k: LaurentPolynomial) -> Output {
    let diff: LaurentPolynomial = &v - &k;
    let text = format!("euler:    {v}\nkauffman: {k}\ndiff:     {diff}\n");
    let verdict = (!diff.is_zero()).then(|| format!("the two routes differ by {diff}"));
    let json = json!({
        "schema": "khovanov-jones/1",
        "pd": pd,
        "jones": v,
        "kauffman": k,
        "difference": diff,
    });
    Output { text, json, verdict }
}

fn shape(report: &FaceReport) -> String {
    let by_dim: Vec<usize> = report.strata_by_codimension.iter().rev().copied().collect();
    match by_dim.as_slice() {
        [1] => "a single point".into(),
        [v, 1] => format!("a closed interval: {v} endpoints"),
        [v, e, 1] => format!("a closed hexagonal disk: {v} vertices, {e} edges"),
        _ => format!("strata by dimension {by_dim:?}"),
    }
}

pub fn cube(n: usize, cap: usize) -> Result<Output, Failure> {
    let c = cube_flow_category(n, cap)?;
    let morphisms = c.morphisms().count();
    let mut text = format!("C({n}): {} objects, {morphisms} morphisms\n", c.len());
    let full = n <= FULL_ENUMERATION;

    let mut top = None;
    if full {
        let (a, b) = (c.find(&"1".repeat(n)).unwrap(), c.find(&"0".repeat(n)).unwrap());
        let report = verify_face_axioms(&face_poset(&c, a, b)?)?;
        writeln!(text, "M({}, {}): {}, Euler count {}", report.source, report.target, shape(&report), report.euler).unwrap();
        top = Some(report);
    }

    let depth = if full { n } else { AXIOM_DEPTH };
    let mut spaces = 0;
    for a in 0..c.len() {
        for b in 0..c.len() {
            if c.greater(a, b) && (c.index(a) - c.index(b)) as usize <= depth {
                verify_face_axioms(&face_poset(&c, a, b)?)?;
                spaces += 1;
            }
        }
    }
    if full {
        writeln!(text, "face axioms OK on all {spaces} moduli spaces").unwrap();
    } else {
        writeln!(text, "face axioms OK on {spaces} moduli spaces of index difference <= {depth}").unwrap();
    }

    let h = chain_homology(&floer_complex(&c)?)?;
    let acyclic = h.is_empty();
    writeln!(text, "Floer complex {}", if acyclic { "acyclic" } else { "NOT acyclic" }).unwrap();
    let json = json!({
        "schema": "khovanov-cube/1",
        "n": n,
        "objects": c.len(),
        "morphisms": morphisms,
        "top": top,
        "axiom_depth": depth,
        "spaces_checked": spaces,
        "acyclic": acyclic,
        "homology": degree_groups(&h),
    });
    Ok(Output {
        text,
        json,
        verdict: (!acyclic).then(|| "the cube Floer complex has homology".into()),
    })
}

fn render_pair(p: &PairReport) -> String {
    let flows: Vec<String> = p
        .broken
        .iter()
        .map(|f| format!("via {} ({:+})", f.via, f.signed))
        .collect();
    format!(
        "{} -> {}: {}; sum {}, {} boundary points, {}",
        p.source,
        p.target,
        flows.join(", "),
        p.signed_sum,
        p.boundary_points,
        if p.balanced { "balanced" } else { "UNBALANCED" }
    )
}

pub fn flowcheck(text: &str) -> Result<Output, Failure> {
    let fc = FlowCategorySkeleton::from_json(text)?;
    let report = d_squared_from_boundary(&fc);
    let unbalanced = report.flagged().count();
    let mut out = String::new();
    for p in &report.pairs {
        out.push_str(&render_pair(p));
        out.push('\n');
    }
    let floer = if unbalanced == 0 {
        Some(chain_homology(&floer_complex(&fc)?)?)
    } else {
        None
    };
    if unbalanced == 0 {
        writeln!(out, "all {} index-2 pairs balanced", report.pairs.len()).unwrap();
    } else {
        writeln!(out, "{unbalanced} of {} index-2 pairs unbalanced", report.pairs.len()).unwrap();
    }
    if let Some(h) = &floer {
        let groups: Vec<String> = h.iter().map(|(k, g)| format!("H_{k} = {g}")).collect();
        let shown = if groups.is_empty() { "0".to_string() } else { groups.join(", ") };
        writeln!(out, "Floer homology: {shown}").unwrap();
    }
    let json = json!({
        "schema": "khovanov-flowcheck/1",
        "objects": fc.len(),
        "pairs": report.pairs,
        "balanced": unbalanced == 0,
        "homology": floer.as_ref().map(degree_groups),
    });
    Ok(Output {
        text: out,
        json,
        verdict: (unbalanced > 0).then(|| format!("{unbalanced} unbalanced index-2 pairs")),
    })
}

#[derive(Serialize)]
struct GeneratorRow {
    generator: String,
    h: i64,
    q: i64,
}

pub fn generators(text: &str, cap: usize) -> Result<Output, Failure> {
    let d = parse_pd(text)?;
    let rows: Vec<GeneratorRow> = all_generators(&d, cap)?
        .into_iter()
        .map(|g| GeneratorRow {
            generator: format!(
                "{}:{}",
                g.gen.config.vertex,
                g.gen.labels.values().map(|l| l.to_string()).collect::<String>()
            ),
            h: g.gr_h,
            q: g.gr_q,
        })
        .collect();
    let width = rows.iter().map(|r| r.generator.len()).max().unwrap_or(0).max(9);
    let mut out = format!("{:<width$}  {:>4}  {:>4}\n", "generator", "h", "q");
    for r in &rows {
        writeln!(out, "{:<width$}  {:>4}  {:>4}", r.generator, r.h, r.q).unwrap();
    }
    ok(
        out,
        json!({"schema": "khovanov-generators/1", "pd": d.to_pd_string(), "generators": rows}),
    )
}

pub fn export(text: &str, cap: usize, skeleton: bool) -> Result<Output, Failure> {
    let d = parse_pd(text)?;
    if skeleton {
        let fc = khovanov_skeleton(&d, cap)?;
        let json = serde_json::to_value(fc.to_file()).expect("skeleton serializes");
        let text = format!(
            "{} objects, {} framed points\n",
            fc.len(),
            fc.morphisms().map(|(_, _, p)| p.len()).sum::<usize>()
        );
        return ok(text, json);
    }
    let c = differential(&d, cap)?;
    let mut text = String::new();
    for (q, block) in &c.blocks {
        let ranks: Vec<String> = block.bases.iter().map(|(h, b)| format!("{h}:{}", b.len())).collect();
        let nnz: usize = block.maps.values().map(|m| m.nnz()).sum();
        writeln!(text, "q = {q}: ranks {}; {nnz} nonzero entries", ranks.join(" ")).unwrap();
    }
    let mut json = serde_json::to_value(&c).expect("complex serializes");
    let obj = json.as_object_mut().unwrap();
    obj.insert("schema".into(), "khovanov-complex/1".into());
    obj.insert("pd".into(), d.to_pd_string().into());
    ok(text, json)
}
