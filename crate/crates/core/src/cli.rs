//! Subcommand driver shared by the binary and the tests. Output is a pure
//! function of the configuration.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::consistency::is_zigzag_consistent;
use crate::dimer::{isomorphic, Dimer};
use crate::dual::dual_dimer;
use crate::e2::{e2_basis, e2_piece, Grading, Parity};
use crate::hochschild::{partial_alpha, partial_corner, psi, theta, CochainElement};
use crate::io::{read_dimer, ParseError};
use crate::jacobi::{cyclic_derivative, render_class};
use crate::ks::{self, Check, KsConfig, KsContext, KsReport, Verdict};
use crate::matching::MatchingKind;
use crate::model::{Model, ModelError};
use crate::sh::{sh_basis, ShElement, ShLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Validate,
    Zigzags,
    Matchings,
    Polytope,
    Dual,
    Jacobi,
    Hh,
    Sh,
    Verify,
    Report,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub input: PathBuf,
    pub command: Command,
    pub n_max: u32,
    /// Vertex id used as the base point; defaults to the first vertex.
    pub base_vertex: Option<String>,
    pub i0: Option<usize>,
    pub ab: Option<(i64, i64)>,
    pub format: Format,
    /// Length cap for witness searches; defaults to four times the arrows.
    pub cap: Option<usize>,
}

impl CliConfig {
    pub fn new(input: impl Into<PathBuf>, command: Command) -> CliConfig {
        CliConfig {
            input: input.into(),
            command,
            n_max: 10,
            base_vertex: None,
            i0: None,
            ab: None,
            format: Format::Json,
            cap: None,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Outcome {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: msg.into() + "\n" }
    }
}

/// A command's result before formatting.
struct Doc {
    ok: bool,
    title: String,
    json: Value,
    markdown: Option<String>,
    stderr: String,
}

pub fn run(cfg: &CliConfig) -> Outcome {
    if cfg.n_max == 0 {
        return Outcome::usage("--n-max must be at least 1");
    }
    let d = match read_dimer(&cfg.input) {
        Ok(d) => d,
        Err(ParseError::Invalid(report)) => {
            let violations: Vec<String> = report.0.violations.iter().map(|v| v.to_string()).collect();
            let doc = Doc {
                ok: false,
                title: format!("{}: invalid dimer", cfg.input.display()),
                json: json!({ "input": cfg.input.display().to_string(), "valid": false, "violations": violations }),
                markdown: None,
                stderr: format!("invalid dimer:\n{}", report.0),
            };
            return emit(cfg, doc);
        }
        Err(e) => return Outcome::usage(format!("error: {e}")),
    };
    let base = match &cfg.base_vertex {
        None => 0,
        Some(id) => match d.vertex_index(id) {
            Some(v) => v,
            None => return Outcome::usage(format!("error: unknown base vertex {id:?}")),
        },
    };
    let doc = match cfg.command {
        Command::Validate => validate(&d),
        Command::Dual => dual_doc(&d),
        other => match Model::new(&d, base) {
            Err(e) => model_failure(&d, e),
            Ok(m) => {
                let i0 = cfg.i0.unwrap_or(0);
                if i0 >= m.zigzags.num_classes() {
                    return Outcome::usage(format!(
                        "error: --i0 {i0} out of range (the dimer has {} classes)",
                        m.zigzags.num_classes()
                    ));
                }
                let ks_cfg = KsConfig { n_max: cfg.n_max, i0, ab: cfg.ab };
                match other {
                    Command::Zigzags => zigzags_doc(&m),
                    Command::Matchings => matchings_doc(&m),
                    Command::Polytope => polytope_doc(&m),
                    Command::Jacobi => jacobi_doc(&m, cfg.cap.unwrap_or(m.default_cap())),
                    Command::Hh => match hh_doc(&m, ks_cfg) {
                        Ok(doc) => doc,
                        Err(e) => return Outcome::usage(format!("error: {e}")),
                    },
                    Command::Sh => match sh_doc(&m, ks_cfg) {
                        Ok(doc) => doc,
                        Err(e) => return Outcome::usage(format!("error: {e}")),
                    },
                    Command::Verify | Command::Report => match ks::verify(&m, ks_cfg) {
                        Ok(r) if other == Command::Verify => verify_doc(&m, &r),
                        Ok(r) => report_doc(&m, &r),
                        Err(e) => return Outcome::usage(format!("error: {e}")),
                    },
                    Command::Validate | Command::Dual => unreachable!(),
                }
            }
        },
    };
    emit(cfg, doc)
}

fn emit(cfg: &CliConfig, doc: Doc) -> Outcome {
    let stdout = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&doc.json).expect("values serialize") + "\n",
        Format::Markdown => doc.markdown.unwrap_or_else(|| {
            format!("# {}\n\n```json\n{}\n```\n", doc.title, serde_json::to_string_pretty(&doc.json).unwrap())
        }),
    };
    Outcome { code: if doc.ok { EXIT_OK } else { EXIT_CHECK_FAILED }, stdout, stderr: doc.stderr }
}

fn model_failure(d: &Dimer, e: ModelError) -> Doc {
    let witness = match &e {
        ModelError::Inconsistent(w) => serde_json::to_value(w).unwrap(),
        other => Value::String(other.to_string()),
    };
    Doc {
        ok: false,
        title: format!("{}: check failed", d.name),
        json: json!({ "name": d.name, "passed": false, "error": e.to_string(), "witness": witness }),
        markdown: None,
        stderr: format!("{}: {e}\n", d.name),
    }
}

fn sizes(d: &Dimer) -> Value {
    json!({ "vertices": d.num_vertices(), "arrows": d.num_arrows(), "faces": d.faces.len() })
}

fn validate(d: &Dimer) -> Doc {
    let report = is_zigzag_consistent(d);
    let stderr = report.witness.as_ref().map(|w| format!("{}: not zigzag consistent: {w}\n", d.name)).unwrap_or_default();
    Doc {
        ok: report.consistent,
        title: format!("{}: validation", d.name),
        json: json!({ "name": d.name, "valid": true, "size": sizes(d), "euler_characteristic": d.euler_characteristic(), "consistency": report }),
        markdown: None,
        stderr,
    }
}

fn dual_doc(d: &Dimer) -> Doc {
    let result = dual_dimer(d).and_then(|dual| Ok((dual_dimer(&dual)?, dual)));
    match result {
        Err(e) => Doc {
            ok: false,
            title: format!("{}: dual", d.name),
            json: json!({ "name": d.name, "error": e.to_string() }),
            markdown: None,
            stderr: format!("{}: dual dimer is invalid: {e}\n", d.name),
        },
        Ok((double, dual)) => {
            let surface = crate::dual::surface_invariants(&dual);
            let iso = isomorphic(&double, d);
            Doc {
                ok: iso && surface.is_ok(),
                title: format!("{}: dual", d.name),
                json: json!({
                    "name": d.name,
                    "dual": serde_json::to_value(dual.to_file()).unwrap(),
                    "surface": surface.as_ref().ok(),
                    "double_dual_isomorphic": iso,
                }),
                markdown: None,
                stderr: String::new(),
            }
        }
    }
}

fn zigzags_doc(m: &Model) -> Doc {
    let d = &m.dimer;
    let z = &m.zigzags;
    let classes: Vec<Value> = z
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let s = &z.strips[i];
            json!({
                "index": i,
                "eta": c.eta,
                "multiplicity": c.multiplicity(),
                "cycles": c.cycles.iter().map(|&k| d.display_word(&z.cycles[k].traversal())).collect::<Vec<_>>(),
                "strips": s.strips.iter().map(|st| json!({
                    "faces": st.faces,
                    "vertices": st.vertices.iter().map(|&v| d.vertices[v].clone()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "plus_boundaries": s.plus_boundaries.iter().map(|w| d.display_word(w)).collect::<Vec<_>>(),
                "minus_boundaries": s.minus_boundaries.iter().map(|w| d.display_word(w)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Doc {
        ok: true,
        title: format!("{}: zigzag cycles", d.name),
        json: json!({
            "name": d.name,
            "orientation": z.orientation,
            "base_vertex": d.vertices[z.base_vertex],
            "num_cycles": z.num_punctures(),
            "num_classes": z.num_classes(),
            "classes": classes,
        }),
        markdown: None,
        stderr: String::new(),
    }
}

fn kind_name(k: MatchingKind) -> String {
    serde_json::to_value(k).unwrap().as_str().map(str::to_string).unwrap_or_else(|| format!("{k:?}"))
}

fn matchings_doc(m: &Model) -> Doc {
    let d = &m.dimer;
    let list: Vec<Value> = m
        .matchings
        .matchings
        .iter()
        .enumerate()
        .map(|(k, p)| {
            json!({
                "index": k,
                "edges": d.word_ids(&p.edges),
                "height": p.height,
                "kind": kind_name(m.matchings.kind(k)),
            })
        })
        .collect();
    Doc {
        ok: true,
        title: format!("{}: perfect matchings", d.name),
        json: json!({ "name": d.name, "count": list.len(), "matchings": list }),
        markdown: None,
        stderr: String::new(),
    }
}

fn polytope_doc(m: &Model) -> Doc {
    let d = &m.dimer;
    let md = &m.matchings;
    let poly = &md.polytope;
    let corners: Vec<Value> = md
        .corners
        .iter()
        .map(|&k| json!({ "matching": k, "edges": d.word_ids(&md.matchings[k].edges), "height": md.matchings[k].height }))
        .collect();
    let strict: Vec<Vec<String>> = md.strict_boundary().iter().map(|&k| d.word_ids(&md.matchings[k].edges)).collect();
    Doc {
        ok: true,
        title: format!("{}: matching polytope", d.name),
        json: json!({
            "name": d.name,
            "hull": poly.hull,
            "edges": poly.edges,
            "boundary_points": poly.boundary_points,
            "interior_points": poly.interior_points,
            "normalized_area": poly.area2,
            "corners": corners,
            "strict_boundary_matchings": strict,
            "corner_structures": md.structures,
        }),
        markdown: None,
        stderr: String::new(),
    }
}

fn jacobi_doc(m: &Model, cap: usize) -> Doc {
    let d = &m.dimer;
    let relations: Vec<Value> = (0..d.num_arrows())
        .map(|e| {
            let terms: Vec<String> = cyclic_derivative(&m.superpotential, e)
                .iter()
                .map(|(k, w)| format!("{}{}", if *k < 0 { "-" } else { "+" }, d.display_word(w)))
                .collect();
            json!({ "arrow": d.arrows[e].id, "relation": terms.join(" ") })
        })
        .collect();
    let central = m.central_w();
    let mut ok = central.is_ok();
    let x_eta: Vec<Value> = (0..m.zigzags.num_classes())
        .map(|i| {
            let eta = m.zigzags.eta(i);
            let c = m.x_alpha_class(0, eta);
            let (witness, status) = match m.with_witness(c.clone(), cap) {
                Ok(w) => (Some(render_class(d, &w)), "found".to_string()),
                Err(e) => {
                    ok = false;
                    (None, e.to_string())
                }
            };
            json!({ "class": i, "eta": eta, "corner_degrees": m.corner_degrees(&c), "witness": witness, "status": status })
        })
        .collect();
    Doc {
        ok,
        title: format!("{}: Jacobi algebra", d.name),
        json: json!({
            "name": d.name,
            "superpotential": m.superpotential.display(d),
            "relations": relations,
            "w_central": central.is_ok(),
            "w": (0..d.num_vertices()).map(|v| render_class(d, &m.w_at(v))).collect::<Vec<_>>(),
            "x_eta": x_eta,
            "cap": cap,
        }),
        markdown: None,
        stderr: central.err().unwrap_or_default(),
    }
}

fn cochain_json(m: &Model, c: &CochainElement<i64>) -> Value {
    Value::String(c.render(&m.dimer))
}

fn checks_json(checks: &[Check]) -> Value {
    serde_json::to_value(checks).unwrap()
}

fn labels_json(m: &Model, parity: Parity, n_max: u32) -> Result<Value, crate::e2::E2Error> {
    Ok(Value::Array(e2_basis(m, parity, n_max)?.iter().map(|l| Value::String(l.render(m))).collect()))
}

fn hh_doc(m: &Model, cfg: KsConfig) -> Result<Doc, ks::KsError> {
    let d = &m.dimer;
    let cx = KsContext::new(m, cfg.i0, cfg.ab)?;
    let corners: Vec<Value> =
        (0..m.num_corners() as i64).map(|i| json!({ "corner": i, "cochain": cochain_json(m, &partial_corner(m, i)) })).collect();
    let n = m.zigzags.num_classes();
    let alphas: Vec<Value> = (0..n)
        .map(|i| m.zigzags.eta(i) + m.zigzags.eta((i + 1) % n))
        .map(|a| match partial_alpha::<i64>(m, a) {
            Ok(c) => json!({ "alpha": a, "cochain": cochain_json(m, &c) }),
            Err(e) => json!({ "alpha": a, "rejected": e.to_string() }),
        })
        .collect();
    let thetas: Vec<Value> = (0..d.num_vertices()).map(|v| json!({ "vertex": d.vertices[v], "cochain": cochain_json(m, &theta(m, v)) })).collect();
    let mut psis = Vec::new();
    for i in 0..n {
        for j in 0..m.zigzags.strips[i].strips.len() {
            let (v, c) = psi::<i64>(m, i, j);
            psis.push(json!({ "class": i, "strip": j, "vertex": d.vertices[v], "cochain": cochain_json(m, &c) }));
        }
    }
    let checks = ks::verify_chain_identities(&cx);
    let ok = checks.iter().all(|c| !c.verdict.is_fail());
    Ok(Doc {
        ok,
        title: format!("{}: Hochschild generators", d.name),
        json: json!({
            "name": d.name,
            "generators": { "corner": corners, "alpha": alphas, "theta": thetas, "psi": psis },
            "checks": checks_json(&checks),
            "e2": { "n_max": cfg.n_max, "even": labels_json(m, Parity::Even, cfg.n_max)?, "odd": labels_json(m, Parity::Odd, cfg.n_max)? },
            "odd_frame": cx.frame,
        }),
        markdown: None,
        stderr: String::new(),
    })
}

fn sh_doc(m: &Model, cfg: KsConfig) -> Result<Doc, ks::KsError> {
    let d = &m.dimer;
    let cx = KsContext::new(m, cfg.i0, cfg.ab)?;
    let basis = sh_basis(m, cfg.n_max);
    let z = &m.zigzags;
    let punctures: Vec<String> = z.cycles.iter().map(|c| d.display_word(&c.traversal())).collect();
    let mut table = Vec::new();
    let one = |l: ShLabel| ShElement::<i64>::single(l, 1);
    let odd = [("p", cx.odd.p.clone()), ("q", cx.odd.q.clone())];
    for (i, c) in z.classes.iter().enumerate() {
        for j in 0..c.multiplicity() {
            let e = ShLabel::E { class: i, parallel: j, n: 1 };
            for (name, coeffs) in &odd {
                let prod = cx.ring.mul(&one(ShLabel::OddMorse { coeffs: coeffs.clone() }), &one(e.clone()));
                table.push(json!({ "left": name, "right": e.render(m), "product": prod.render(m) }));
            }
            let sq = cx.ring.mul(&one(e.clone()), &one(e.clone()));
            table.push(json!({ "left": e.render(m), "right": e.render(m), "product": sq.render(m) }));
        }
    }
    let render_odd = |coeffs: &[i64]| ShLabel::OddMorse { coeffs: coeffs.to_vec() }.render(m);
    Ok(Doc {
        ok: cx.ring.pairing.rows_ok(),
        title: format!("{}: symplectic cohomology model", d.name),
        json: json!({
            "name": d.name,
            "genus": basis.genus,
            "num_punctures": basis.num_punctures,
            "odd_rank": basis.odd_rank,
            "labels": basis.labels.iter().map(|l| l.render(m)).collect::<Vec<_>>(),
            "punctures": punctures,
            "pairing": { "arrows": d.arrows.iter().map(|a| a.id.clone()).collect::<Vec<_>>(), "matrix": cx.ring.pairing.matrix },
            "ring_table": table,
            "distinguished": {
                "i0": cx.odd.i0,
                "p": render_odd(&cx.odd.p),
                "q": render_odd(&cx.odd.q),
                "xi": (0..d.num_vertices()).map(|v| json!({ "vertex": d.vertices[v], "path": d.word_ids(&cx.odd.xi_paths[v]) })).collect::<Vec<_>>(),
                "strip_points": cx.odd.strip_points.iter().flatten().map(|s| json!({
                    "class": s.class, "strip": s.strip, "vertex": d.vertices[s.vertex], "path": d.word_ids(&s.path)
                })).collect::<Vec<_>>(),
            },
        }),
        markdown: None,
        stderr: String::new(),
    })
}

/// Structural checks that precede the comparison.
fn structure_checks(m: &Model) -> Vec<Check> {
    let d = &m.dimer;
    let poly = &m.matchings.polytope;
    let (g, n) = (m.surface.genus, m.surface.punctures as i64);
    let (b, i) = (poly.boundary_points, poly.interior_points);
    let q0 = d.num_vertices() as i64;
    let double = dual_dimer(&m.dual).map(|dd| isomorphic(&dd, d)).unwrap_or(false);
    let check = |name: &str, ok: bool, why: String| Check { name: name.into(), verdict: if ok { Verdict::Pass } else { Verdict::Fail(why) } };
    vec![
        check("validation", true, String::new()),
        check("zigzag consistency", true, String::new()),
        check("double dual is isomorphic", double, "dual of the dual differs".into()),
        check("g = I", g == i, format!("g = {g}, I = {i}")),
        check("N = B", n == b, format!("N = {n}, B = {b}")),
        check("|Q0| = 2I + B − 2", q0 == 2 * i + b - 2, format!("|Q0| = {q0}, 2I + B − 2 = {}", 2 * i + b - 2)),
    ]
}

fn verify_doc(m: &Model, r: &KsReport) -> Doc {
    let structure = structure_checks(m);
    let failures: Vec<String> = structure
        .iter()
        .filter_map(|c| match &c.verdict {
            Verdict::Fail(w) => Some(format!("{}: {w}", c.name)),
            _ => None,
        })
        .chain(r.failures())
        .collect();
    let ok = failures.is_empty();
    let doc_json = json!({ "name": m.dimer.name, "passed": ok, "failures": failures, "structure": checks_json(&structure), "ks": r });
    let stderr = failures.iter().map(|f| format!("{}: {f}\n", m.dimer.name)).collect();
    Doc { ok, title: format!("{}: verification", m.dimer.name), markdown: Some(verify_markdown(m, r, &structure, ok)), json: doc_json, stderr }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn verdict_cell(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::Fail(w) => cell(&format!("FAIL: {w}")),
        Verdict::Skipped(w) => cell(&format!("skipped: {w}")),
    }
}

fn verify_markdown(m: &Model, r: &KsReport, structure: &[Check], ok: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Verification: {}\n", m.dimer.name);
    let _ = writeln!(s, "Overall: **{}**\n", if ok { "pass" } else { "FAIL" });
    let _ = writeln!(s, "| check | verdict |\n|---|---|");
    for c in structure.iter().chain(&r.counts).chain(&r.chain).chain(&r.ring) {
        let _ = writeln!(s, "| {} | {} |", cell(&c.name), verdict_cell(&c.verdict));
    }
    let pieces_ok = r.pieces.iter().filter(|p| p.verdict == Verdict::Pass).count();
    let _ = writeln!(s, "| graded pieces up to winding {} | {pieces_ok}/{} pass |", r.config.n_max, r.pieces.len());
    let _ = writeln!(s, "| singularity report | {} |", verdict_cell(&r.singularity.verdict));
    s
}

fn surface_phrase(g: i64, n: usize) -> String {
    match (g, n) {
        (0, 3) => "a pair of pants (a sphere with three punctures)".into(),
        (0, n) => format!("a sphere with {n} punctures"),
        (g, n) => format!("a genus {g} surface with {n} punctures"),
    }
}

fn report_doc(m: &Model, r: &KsReport) -> Doc {
    let verify = verify_doc(m, r);
    let d = &m.dimer;
    let z = &m.zigzags;
    let poly = &m.matchings.polytope;
    let mut s = String::new();
    let _ = writeln!(s, "# Dimer report: {}\n", d.name);
    let _ = writeln!(s, "## Quiver\n");
    let _ = writeln!(s, "- {} vertices, {} arrows, {} faces", d.num_vertices(), d.num_arrows(), d.faces.len());
    let _ = writeln!(s, "- superpotential: `{}`\n", m.superpotential.display(d));
    let _ = writeln!(s, "## Zigzag cycles\n");
    let _ = writeln!(s, "| class | η | multiplicity | cycles |\n|---|---|---|---|");
    for (i, c) in z.classes.iter().enumerate() {
        let words: Vec<String> = c.cycles.iter().map(|&k| format!("`{}`", d.display_word(&z.cycles[k].traversal()))).collect();
        let _ = writeln!(s, "| {i} | {} | {} | {} |", c.eta, c.multiplicity(), words.join(", "));
    }
    let _ = writeln!(s, "\n## Perfect matchings\n");
    let _ = writeln!(s, "- {} perfect matchings; polytope with {} boundary and {} interior lattice points, normalized area {}", m.matchings.matchings.len(), poly.boundary_points, poly.interior_points, poly.area2);
    let corners: Vec<String> = m.matchings.corners.iter().map(|&k| format!("{{{}}}", d.word_ids(&m.matchings.matchings[k].edges).join(","))).collect();
    let _ = writeln!(s, "- corners: {}", corners.join(" "));
    let strict: Vec<String> = m.matchings.strict_boundary().iter().map(|&k| format!("{{{}}}", d.word_ids(&m.matchings.matchings[k].edges).join(","))).collect();
    let _ = writeln!(s, "- boundary matchings that are not corners: {}\n", if strict.is_empty() { "none".into() } else { strict.join(" ") });
    let _ = writeln!(s, "## Mirror curve\n");
    let _ = writeln!(
        s,
        "The dual dimer has Euler characteristic {}, so the mirror curve is {}.\n",
        m.surface.euler,
        surface_phrase(m.surface.genus, m.surface.punctures)
    );
    let _ = writeln!(s, "## Graded comparison\n");
    let f = &r.frame;
    let _ = writeln!(s, "Base class i0 = {}, W_odd = aU + bV with (a, b) = ({}, {}), weights c = {:?}.\n", f.i0, f.a, f.b, f.c);
    let _ = writeln!(s, "| piece | symplectic basis | page labels | det (basis) | det (images) | verdict |\n|---|---|---|---|---|---|");
    for p in r.pieces.iter().filter(|p| p.grading.winding <= 2) {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            p.grading,
            p.sh_basis.join(", "),
            p.e2_labels.join(", "),
            p.sh_det.map_or("-".into(), |x| x.to_string()),
            p.ks_det,
            verdict_cell(&p.verdict)
        );
    }
    let hidden = r.pieces.iter().filter(|p| p.grading.winding > 2).count();
    if hidden > 0 {
        let passed = r.pieces.iter().filter(|p| p.grading.winding > 2 && p.verdict == Verdict::Pass).count();
        let _ = writeln!(s, "\nPieces of winding 3 to {}: {passed}/{hidden} pass.", r.config.n_max);
    }
    let sg = &r.singularity;
    let _ = writeln!(s, "\n## Singularity\n");
    for e in &sg.edges {
        let _ = writeln!(s, "- hull edge of class {}: {} interior lattice points, {} Ψ classes", e.class, e.interior_points, e.psi_families);
    }
    let _ = writeln!(s, "- normalized area {}, fixed-point depth {}, {} Θ classes", sg.normalized_area, sg.fixed_point_depth, sg.theta_classes);
    let _ = writeln!(
        s,
        "- {}\n",
        if sg.is_smooth() { "no Ψ and no Θ classes: the singularity is smooth".to_string() } else { format!("{} Ψ families and {} Θ classes", sg.psi_families(), sg.theta_classes) }
    );
    s.push_str(&verify.markdown.clone().unwrap_or_default().replace("# Verification", "## Verification"));
    let odd0 = e2_piece(m, Grading::zero(Parity::Odd)).len();
    let json = json!({
        "name": d.name,
        "passed": verify.ok,
        "size": sizes(d),
        "superpotential": m.superpotential.display(d),
        "zigzags": zigzags_doc(m).json,
        "polytope": polytope_doc(m).json,
        "surface": m.surface,
        "mirror_curve": surface_phrase(m.surface.genus, m.surface.punctures),
        "odd_winding_zero_labels": odd0,
        "verification": verify.json,
    });
    Doc { ok: verify.ok, title: format!("{}: report", d.name), json, markdown: Some(s), stderr: verify.stderr }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_is_deterministic() {
        let mut cfg = CliConfig::new("spp.json", Command::Report);
        cfg.n_max = 3;
        let a = run(&cfg);
        assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
        assert_eq!(a, run(&cfg));
        cfg.format = Format::Markdown;
        assert_eq!(run(&cfg), run(&cfg));
    }

    #[test]
    fn unknown_base_vertex_is_usage_error() {
        let mut cfg = CliConfig::new("c3.json", Command::Zigzags);
        cfg.base_vertex = Some("nope".into());
        assert_eq!(run(&cfg).code, EXIT_USAGE);
    }

    #[test]
    fn every_subcommand_runs_on_builtins() {
        use Command::*;
        for name in ["c3.json", "conifold.json", "spp.json"] {
            for c in [Validate, Zigzags, Matchings, Polytope, Dual, Jacobi, Hh, Sh, Verify, Report] {
                let mut cfg = CliConfig::new(name, c);
                cfg.n_max = 2;
                let out = run(&cfg);
                assert_eq!(out.code, EXIT_OK, "{name} {c:?}: {}", out.stderr);
                serde_json::from_str::<Value>(&out.stdout).unwrap();
            }
        }
    }
}
