//! Verification suites: each check carries a stable claim id.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use infocap::counting::{formula_count, FormulaLabel};
use infocap::enumeration::{DomainSpec, Enumerator};
use infocap::equivariance::obstruction_report;
use infocap::ids::{
    canonicalize_ids, class_automorphisms, eq_up_to_ids, kboth_instances, kboth_to_v11, kid_cycle_property_check,
    kval_boundedness_report, v11_to_kboth, IdClass, IdInstance,
};
use infocap::lattice::{
    build_binary_hasse, build_ternary_chain, class_schema, schema, three_cycle, verify_table1_equivalences,
    EquivalenceKind, BINARY_COVERS, TERNARY_CHAIN,
};
use infocap::mappings::{catalog, map_swap_columns, verify_mapping};
use infocap::relmodel::{GraphClassLabel, Value};
use infocap::sbchain::{
    check_equivariant_bijection, classify_chains, mapping_pair_graph, parse_graph, sb_bijection, NodeMap, Shape,
};
use infocap::{Error, Permutation, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Counts,
    Equivalences,
    Mappings,
    Obstruction,
    Hasse,
    Ternary,
    Ids,
    Sb,
    All,
}

impl Suite {
    const EACH: [Suite; 8] = [
        Suite::Counts,
        Suite::Equivalences,
        Suite::Mappings,
        Suite::Obstruction,
        Suite::Hasse,
        Suite::Ternary,
        Suite::Ids,
        Suite::Sb,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

fn check(claim: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        claim: claim.into(),
        passed,
        detail: detail.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub n: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("checks at n = {} (finite instances only; nothing beyond the tested sizes is claimed)\n", self.n);
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let mut lines = c.detail.lines();
            let _ = writeln!(out, "{status} {:<34} {}", c.claim, lines.next().unwrap_or(""));
            for l in lines {
                let _ = writeln!(out, "     {:<34} {l}", "");
            }
        }
        let ok = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{ok} of {} checks passed", self.checks.len());
        if let Some(c) = self.first_failure() {
            let _ = writeln!(out, "first failure: {}", c.claim);
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("claim,status,detail\n");
        for c in &self.checks {
            let detail = c.detail.replace('"', "\"\"").replace('\n', "; ");
            let status = if c.passed { "pass" } else { "fail" };
            let _ = writeln!(out, "{},{status},\"{detail}\"", c.claim);
        }
        out
    }
}

pub fn run(suite: Suite, n: usize, en: &Enumerator) -> Result<Report> {
    let mut checks = Vec::new();
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in suites {
        checks.extend(match s {
            Suite::Counts => counts(n, en)?,
            Suite::Equivalences => equivalences(n, en)?,
            Suite::Mappings => mappings(n, en)?,
            Suite::Obstruction => obstruction()?,
            Suite::Hasse => hasse(n, en)?,
            Suite::Ternary => ternary(n, en)?,
            Suite::Ids => ids(n)?,
            Suite::Sb => sb(n, en)?,
            Suite::All => unreachable!(),
        });
    }
    Ok(Report { n, checks })
}

fn counts(n: usize, en: &Enumerator) -> Result<Vec<Check>> {
    let dom = DomainSpec::new(n);
    let mut out = Vec::new();
    for label in GraphClassLabel::ALL {
        let f = FormulaLabel::Binary(label);
        let formula = formula_count(f, n);
        let enumerated = en.count(&class_schema(label), &dom)?;
        out.push(check(
            format!("count.{}", f.formula_name()),
            formula == enumerated,
            format!("{label} n={n}: formula {formula}, enumerated {enumerated}"),
        ));
    }
    Ok(out)
}

fn equivalences(n: usize, en: &Enumerator) -> Result<Vec<Check>> {
    let report = verify_table1_equivalences(n.min(4), en)?;
    let mut out: Vec<Check> = Vec::new();
    for r in &report.rows {
        let rel = match r.kind {
            EquivalenceKind::Logical => "=",
            EquivalenceKind::Generic => "~",
        };
        let claim = format!("equiv.{}{rel}{}", r.left, r.right);
        match out.last_mut() {
            Some(c) if c.claim == claim => {
                if c.passed && r.diff.is_some() {
                    c.passed = false;
                    c.detail = format!("n={}: {}", r.n, r.diff.as_deref().unwrap_or(""));
                }
            }
            _ => out.push(check(claim, r.diff.is_none(), r.diff.clone().map(|d| format!("n={}: {d}", r.n)).unwrap_or_default())),
        }
    }
    for c in out.iter_mut().filter(|c| c.passed) {
        c.detail = format!("{} for n <= {}", if c.claim.contains('~') { "swap bijection" } else { "identical instance sets" }, report.n_max);
    }
    Ok(out)
}

fn mappings(n: usize, en: &Enumerator) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for map in catalog() {
        let r = verify_mapping(&map, n, en)?;
        let mut detail = format!(
            "{} -> {}: {} sources, target {}, injective {}, generic {}",
            map.source.name,
            map.target.name,
            r.sources,
            if r.target_violation.is_none() { "ok" } else { "violated" },
            r.injectivity.passed(),
            r.genericity.passed(),
        );
        if map.has_inverse() {
            let _ = write!(detail, ", round trip {}", if r.round_trip_failure.is_none() { "ok" } else { "broken" });
        }
        if !map.expected_generic {
            detail.push_str(" (expected not generic)");
        }
        out.push(check(format!("map.{}", map.name), r.as_expected(map.expected_generic), detail));
    }
    Ok(out)
}

fn obstruction() -> Result<Vec<Check>> {
    let none = BTreeSet::new();
    let symm = obstruction_report(&three_cycle(), &none, &class_schema(GraphClassLabel::SYMM))?;
    let digraph = obstruction_report(&three_cycle(), &none, &class_schema(GraphClassLabel::DIGRAPH))?;
    Ok(vec![
        check(
            "obstruction.cycles-symm",
            symm.is_obstruction() && symm.examined == 64,
            format!("3-cycle has no SYMM candidate\n{symm}"),
        ),
        check(
            "obstruction.control-digraph",
            !digraph.is_obstruction(),
            format!("{} DIGRAPH candidates among {}", digraph.candidates.len(), digraph.examined),
        ),
    ])
}

fn edge_list(edges: &[(String, String)]) -> String {
    edges.iter().map(|(a, b)| format!("{a} -> {b}")).collect::<Vec<_>>().join(", ")
}

fn hasse(n: usize, en: &Enumerator) -> Result<Vec<Check>> {
    let n_verify = n.max(3);
    let h = build_binary_hasse(n_verify, None, en)?;
    let mut want: Vec<(String, String)> = BINARY_COVERS.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    want.sort();
    let mut got = h.edges.clone();
    got.sort();
    let detail = if got == want {
        format!("{} nodes, {} edges, evidence checked at n <= {n_verify}", h.nodes.len(), got.len())
    } else {
        format!("edges differ: {}", edge_list(&got))
    };
    Ok(vec![check("hasse.binary", got == want, detail)])
}

fn ternary(n: usize, en: &Enumerator) -> Result<Vec<Check>> {
    let n_verify = n.clamp(2, 3);
    let h = build_ternary_chain(n_verify, en)?;
    let chain_ok = h.edges.len() == 7 && TERNARY_CHAIN.windows(2).all(|w| h.has_edge(w[0], w[1]));
    let detail = if chain_ok {
        format!("{} evidence checked at n <= {n_verify}", TERNARY_CHAIN.join(" -> "))
    } else {
        format!("edges differ: {}", edge_list(&h.edges))
    };
    Ok(vec![check("hasse.ternary", chain_ok, detail)])
}

/// Every (1,1) instance over values `0..nv` and ids `#1..#m`.
fn id_instances(nv: usize, m: u32) -> Vec<IdInstance> {
    let cells: Vec<(u32, u32)> = (1..=m).flat_map(|i| (0..nv as u32).map(move |v| (i, v))).collect();
    (0u64..1 << cells.len())
        .map(|mask| {
            let chosen: Vec<(u32, u32)> = (0..cells.len()).filter(|b| mask >> b & 1 == 1).map(|b| cells[b]).collect();
            IdInstance::pairs(&chosen)
        })
        .collect()
}

fn ids(n: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let nv = n.min(2);
    let insts = id_instances(nv, 3);
    let mut bad = None;
    for i in &insts {
        let c = canonicalize_ids(i)?;
        if canonicalize_ids(&c)? != c || !eq_up_to_ids(i, &c)? {
            bad = Some(i.clone());
            break;
        }
    }
    out.push(check(
        "ids.canonical-idempotent",
        bad.is_none(),
        match &bad {
            None => format!("{} instances over {nv} values and 3 ids", insts.len()),
            Some(i) => format!("fails on {i}"),
        },
    ));

    let b = kval_boundedness_report(1, 1..=4)?;
    let kid: Vec<usize> = b.rows.iter().map(|r| r.kid).collect();
    let kval: Vec<usize> = b.rows.iter().map(|r| r.kval).collect();
    out.push(check(
        "ids.kval-bounded",
        b.separates() && kval == [2, 2, 2, 2] && kid == [2, 3, 4, 5],
        format!("one value, max_ids 1..4: K_val {kval:?}, K_id {kid:?}"),
    ));

    let (a, bv, c, d) = (Value(0), Value(1), Value(2), Value(3));
    let cls = IdClass::of(&IdInstance::pairs(&[(1, 0), (1, 1), (2, 2), (2, 3)]))?;
    let g = class_automorphisms(&cls, &BTreeSet::new())?;
    let p = |cs: &[&[Value]]| Permutation::from_cycles([a, bv, c, d], cs);
    let both = g.contains(&p(&[&[a, c], &[bv, d]])?);
    let singles = g.contains(&p(&[&[a, c]])?) || g.contains(&p(&[&[bv, d]])?);
    out.push(check(
        "ids.four-tuple-automorphisms",
        both && !singles,
        format!("(v0 v2)(v1 v3) in Aut: {both}; a single transposition in Aut: {singles}"),
    ));

    let nc = n.min(3);
    let cyc = kid_cycle_property_check(nc, 3)?;
    out.push(check("ids.kid-cycles", cyc.passed(), format!("{cyc:?} (values <= {nc}, ids <= 3)")));

    let ks = kboth_instances(nc, 3);
    let mut broken = None;
    for i in &ks {
        let u = kboth_to_v11(i)?;
        if !eq_up_to_ids(&v11_to_kboth(&u)?, i)? || kboth_to_v11(&v11_to_kboth(&u)?)? != u {
            broken = Some(i.clone());
            break;
        }
    }
    out.push(check(
        "ids.kboth-unary-round-trip",
        broken.is_none(),
        match &broken {
            None => format!("{} K_both instances over {nc} values and 3 ids", ks.len()),
            Some(i) => format!("fails on {i}"),
        },
    ));
    Ok(out)
}

const SB_CYCLE: &str = "node x1 X\nnode y1 Y\nf x1 y1\ng y1 x1\n";
const SB_SH1: &str = "node x1 X\nnode y1 Y\nnode x2 X\nnode y2 Y truncated\nf x1 y1\ng y1 x2\nf x2 y2\n";
const SB_SH2: &str = "node y1 Y\nnode x1 X\nnode y2 Y\nnode x2 X truncated\ng y1 x1\nf x1 y2\ng y2 x2\n";
const SB_TWO_CYCLES: &str = "node x1 X\nnode y1 Y\nnode x2 X\nnode y2 Y\nf x1 y1\ng y1 x1\nf x2 y2\ng y2 x2\n";
const SB_TWO_CHAINS: &str = "node x1 X\nnode y1 Y truncated\nnode x2 X\nnode y2 Y truncated\nf x1 y1\nf x2 y2\n";

fn swap_action() -> NodeMap {
    [("x1", "x2"), ("x2", "x1"), ("y1", "y2"), ("y2", "y1")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

fn sb(n: usize, en: &Enumerator) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (claim, text, shape) in [
        ("sb.shape-cycle", SB_CYCLE, Shape::SH4),
        ("sb.shape-x-start", SB_SH1, Shape::SH1),
        ("sb.shape-y-start", SB_SH2, Shape::SH2),
    ] {
        let shapes: Vec<Shape> = classify_chains(&parse_graph(text)?)?.iter().map(|c| c.shape).collect();
        out.push(check(claim, shapes == [shape], format!("components {shapes:?}")));
    }
    let h = sb_bijection(&parse_graph(SB_SH2)?)?;
    out.push(check(
        "sb.g-inverse-rule",
        h.image("x1") == Some("y1"),
        format!("x1 paired with {}", h.image("x1").unwrap_or("nothing")),
    ));
    for (claim, text) in [("sb.equivariant-cycles", SB_TWO_CYCLES), ("sb.equivariant-chains", SB_TWO_CHAINS)] {
        let g = parse_graph(text)?;
        let v = check_equivariant_bijection(&g, &[NodeMap::new(), swap_action()])?;
        out.push(check(claim, v.passed(), format!("{v:?}")));
    }

    let s5 = schema("S5").expect("catalog");
    let s10 = schema("S10").expect("catalog");
    let (graph, action) = mapping_pair_graph(&map_swap_columns(&s5, &s10)?, &map_swap_columns(&s10, &s5)?, n, en)?;
    let comps = classify_chains(&graph)?;
    let h = sb_bijection(&graph)?;
    let f_pairing = h.is_total()
        && comps.iter().all(|c| c.shape == Shape::SH4)
        && h.pairs.iter().all(|(x, y)| graph.successor(x) == Some(y.as_str()));
    out.push(check(
        "sb.finite-is-f-pairing",
        f_pairing,
        format!("S5/S10 at n={n}: {} x nodes, {} components", h.pairs.len(), comps.len()),
    ));
    let v = check_equivariant_bijection(&graph, &action)?;
    out.push(check("sb.equivariant-swap-pair", v.passed(), format!("{v:?}")));
    Ok(out)
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Parse { .. } | Error::Constraint(_) | Error::Precondition(_) => 2,
        Error::Resource { .. } => 3,
        Error::Recovery(_) | Error::Consistency(_) => 1,
    }
}
