//! End-to-end acceptance checks on the bundled examples. Prints one line per
//! criterion and exits nonzero if any fails.

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;

use dimer_ks::dimer::isomorphic;
use dimer_ks::hochschild::{d0, d1, d2, Slot};
use dimer_ks::io::builtin_source;
use dimer_ks::jacobi::{composable_words, jacobi_reduce_oracle, JElement};
use dimer_ks::ks::{singularity_report, verify, verify_chain_identities, KsConfig, KsContext};
use dimer_ks::model::Model;
use dimer_ks::{builtin, dual_dimer, is_zigzag_consistent, parse_dimer, surface_invariants, Cochain, Sign, Word};
use serde_json::{json, Value};

const NAMES: [&str; 3] = ["c3", "conifold", "spp"];

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn model(name: &str) -> Result<Model, String> {
    let d = builtin(name).map_err(|e| format!("{name}: {e}"))?;
    Model::new(&d, 0).map_err(|e| format!("{name}: {e}"))
}

fn validation_and_duality() -> Outcome {
    for name in NAMES {
        let d = builtin(name).map_err(|e| format!("{name}: {e}"))?;
        let c = is_zigzag_consistent(&d);
        ensure!(c.consistent, "{name}: inconsistent: {:?}", c.witness);
        let dual = dual_dimer(&d).map_err(|e| format!("{name}: dual: {e}"))?;
        let double = dual_dimer(&dual).map_err(|e| format!("{name}: double dual: {e}"))?;
        ensure!(isomorphic(&double, &d), "{name}: double dual is not isomorphic");
    }
    let m = model("spp")?;
    let z = &m.zigzags;
    ensure!(z.cycles.len() == 5 && z.num_classes() == 4, "spp: {} cycles in {} classes", z.cycles.len(), z.num_classes());
    let doubled: Vec<_> = z.classes.iter().filter(|c| c.multiplicity() == 2).collect();
    ensure!(doubled.len() == 1, "spp: {} doubled classes", doubled.len());
    let words: BTreeSet<String> = doubled[0].cycles.iter().map(|&k| m.dimer.display_word(&z.cycles[k].traversal())).collect();
    let expected: BTreeSet<String> = ["ga", "ec"].into_iter().map(String::from).collect();
    ensure!(words == expected, "spp: doubled class words {words:?}");
    Ok("3 built-ins valid, consistent, double dual isomorphic; spp doubled class {ga, ec}".into())
}

fn surface_counts() -> Outcome {
    let mut summary = Vec::new();
    for name in NAMES {
        let m = model(name)?;
        let s = surface_invariants(&m.dual).map_err(|e| format!("{name}: {e}"))?;
        let p = &m.matchings.polytope;
        ensure!(s.genus == p.interior_points, "{name}: genus {} vs {} interior points", s.genus, p.interior_points);
        ensure!(s.punctures as i64 == p.boundary_points, "{name}: {} punctures vs {} boundary points", s.punctures, p.boundary_points);
        let nv = m.dimer.num_vertices() as i64;
        ensure!(nv == 2 * p.interior_points + p.boundary_points - 2, "{name}: {nv} vertices vs 2I + B − 2");
        summary.push(format!("{name} (g={}, N={})", s.genus, s.punctures));
    }
    let spp = surface_invariants(&model("spp")?.dual).unwrap();
    let c3 = surface_invariants(&model("c3")?.dual).unwrap();
    ensure!((spp.genus, spp.punctures) == (0, 5) && (c3.genus, c3.punctures) == (0, 3), "unexpected curve types");
    Ok(summary.join(", "))
}

fn polytope_structure() -> Outcome {
    for name in NAMES {
        let m = model(name)?;
        let md = &m.matchings;
        ensure!(md.structures.len() == m.zigzags.num_classes(), "{name}: {} corner structures", md.structures.len());
        for e in &md.polytope.edges {
            let mult = m.zigzags.multiplicity(e.class_index) as i64;
            ensure!(e.length == mult, "{name}: edge of class {} has length {} vs multiplicity {mult}", e.class_index, e.length);
        }
    }
    let m = model("spp")?;
    let strict: BTreeSet<BTreeSet<String>> = m
        .matchings
        .strict_boundary()
        .iter()
        .map(|&k| m.dimer.word_ids(&m.matchings.matchings[k].edges).into_iter().collect())
        .collect();
    let expected: BTreeSet<BTreeSet<String>> =
        [["a", "e"], ["c", "g"]].iter().map(|p| p.iter().map(|s| s.to_string()).collect()).collect();
    ensure!(strict == expected, "spp strict boundary matchings {strict:?}");
    Ok("corner structures and edge lengths match; spp strict boundary {a,e} {c,g}".into())
}

fn jacobi_canonical_forms() -> Outcome {
    const MAX_LEN: usize = 6;
    const CAP: usize = 10;
    let mut total = 0;
    for name in NAMES {
        let m = model(name)?;
        let d = &m.dimer;
        for e in 0..d.num_arrows() {
            let (p, q) = (d.face_complement(e, Sign::Positive), d.face_complement(e, Sign::Negative));
            for pm in &m.matchings.matchings {
                ensure!(pm.degree(&p) == pm.degree(&q), "{name}: relation at {} not homogeneous", d.arrows[e].id);
            }
        }
        let mut comp: HashMap<Word, usize> = HashMap::new();
        let mut next = 0;
        for len in 1..=MAX_LEN {
            for w in composable_words(d, len) {
                if comp.contains_key(&w) {
                    continue;
                }
                for r in jacobi_reduce_oracle(d, &w, CAP) {
                    if r.len() <= MAX_LEN {
                        comp.insert(r, next);
                    }
                }
                next += 1;
            }
        }
        let mut by_class = HashMap::new();
        let mut by_comp = HashMap::new();
        for (w, &c) in &comp {
            let class = m.canonical_form(w).map_err(|e| format!("{name}: {e}"))?;
            if let Some(&other) = by_class.get(&class) {
                ensure!(other == c, "{name}: {} shares a class with a different oracle component", d.display_word(w));
            }
            if let Some(other) = by_comp.get(&c) {
                ensure!(*other == class, "{name}: oracle component of {} splits", d.display_word(w));
            }
            by_class.insert(class.clone(), c);
            by_comp.insert(c, class);
        }
        total += comp.len();
    }
    Ok(format!("relations homogeneous; {total} words agree with the rewrite oracle"))
}

fn complex_property() -> Outcome {
    let mut checks = 0;
    for name in NAMES {
        let m = model(name)?;
        let d = &m.dimer;
        let words: Vec<Word> = (1..=4).flat_map(|l| composable_words(d, l)).collect();
        let mut zeros = Vec::new();
        for v in 0..d.num_vertices() {
            let mut c = Cochain::zero(0);
            c.try_add(d, Slot::Unit(v), &JElement::single(m.idempotent(v), 1)).map_err(|e| e.to_string())?;
            zeros.push(c);
        }
        let mut ones = Vec::new();
        for w in &words {
            let class = m.canonical_form(w).map_err(|e| e.to_string())?;
            let (t, h) = d.path_endpoints(w).unwrap();
            if t == h {
                let mut c = Cochain::zero(0);
                c.try_add(d, Slot::Unit(t), &JElement::single(class.clone(), 1)).map_err(|e| e.to_string())?;
                zeros.push(c);
            }
            if w.len() <= 3 {
                for e in (0..d.num_arrows()).filter(|&e| (d.tail(e), d.head(e)) == (t, h)) {
                    let mut c = Cochain::zero(1);
                    c.try_add(d, Slot::X(e), &JElement::single(class.clone(), 1)).map_err(|e| e.to_string())?;
                    ones.push(c);
                }
            }
        }
        for c in &zeros {
            ensure!(d1(&m, &d0(&m, c)).is_zero(), "{name}: d1 d0 ≠ 0 on {}", c.render(d));
        }
        for c in &ones {
            ensure!(d2(&m, &d1(&m, c)).is_zero(), "{name}: d2 d1 ≠ 0 on {}", c.render(d));
        }
        checks += zeros.len() + ones.len();
        let cx = KsContext::new(&m, 0, None).map_err(|e| format!("{name}: {e}"))?;
        for chk in verify_chain_identities(&cx) {
            ensure!(!chk.verdict.is_fail(), "{name}: {}: {:?}", chk.name, chk.verdict);
        }
    }
    Ok(format!("d² = 0 on {checks} spanning elements; chain identities hold"))
}

fn graded_comparison() -> Outcome {
    let mut pieces = 0;
    for name in NAMES {
        let m = model(name)?;
        let r = verify(&m, KsConfig { n_max: 10, ..Default::default() }).map_err(|e| format!("{name}: {e}"))?;
        let fails = r.failures();
        ensure!(fails.is_empty(), "{name}: {}", fails.join("; "));
        pieces += r.pieces.len();
    }
    Ok(format!("all checks pass at n_max = 10 ({pieces} graded pieces)"))
}

fn singularity() -> Outcome {
    for (name, psi, theta, smooth) in [("c3", 0, 0, true), ("conifold", 0, 1, false), ("spp", 1, 2, false)] {
        let r = singularity_report(&model(name)?);
        ensure!(!r.verdict.is_fail(), "{name}: {:?}", r.verdict);
        ensure!(
            r.psi_families() == psi && r.theta_classes == theta && r.is_smooth() == smooth,
            "{name}: {} Ψ families, {} Θ classes, smooth = {}",
            r.psi_families(),
            r.theta_classes,
            r.is_smooth()
        );
    }
    Ok("c3 smooth; conifold 0 Ψ, 1 Θ; spp 1 Ψ, 2 Θ".into())
}

/// Message explaining why a corrupted file is rejected, or `None` if it is
/// accepted.
fn rejection(v: &Value) -> Option<String> {
    let d = match parse_dimer(&v.to_string()) {
        Err(e) => return Some(e.to_string()),
        Ok(d) => d,
    };
    let c = is_zigzag_consistent(&d);
    if !c.consistent {
        return Some(c.witness.map(|w| w.to_string()).unwrap_or_default());
    }
    Model::new(&d, 0).err().map(|e| e.to_string())
}

fn negative_controls() -> Outcome {
    let base: Value = serde_json::from_str(builtin_source("spp").unwrap()).map_err(|e| e.to_string())?;
    let arrow = |v: &mut Value, id: &str| -> usize {
        v["arrows"].as_array().unwrap().iter().position(|a| a["id"] == id).unwrap()
    };
    let mut cases: Vec<(&str, Value)> = Vec::new();

    let mut flipped = base.clone();
    flipped["faces"][0]["sign"] = json!("-");
    cases.push(("face sign flipped", flipped));

    let mut shifted = base.clone();
    let a = arrow(&mut shifted, "a");
    shifted["arrows"][a]["shift"] = json!([1, -1]);
    cases.push(("one shift changed", shifted));

    let mut swapped = base.clone();
    swapped["faces"][0]["boundary"] = json!(["e", "c", "b", "f"]);
    cases.push(("boundary word swapped", swapped));

    // Faces stay closed; the homology of the zigzag cycles changes.
    let mut twisted = base.clone();
    for (id, dx) in [("b", 1), ("d", 1), ("c", -1), ("g", -1)] {
        let k = arrow(&mut twisted, id);
        let x = twisted["arrows"][k]["shift"][0].as_i64().unwrap();
        twisted["arrows"][k]["shift"][0] = json!(x + dx);
    }
    cases.push(("shifts twisted by a matching difference", twisted));

    let mut out = Vec::new();
    for (what, v) in cases {
        match rejection(&v) {
            Some(msg) if !msg.trim().is_empty() => out.push(format!("{what}: {}", msg.split_whitespace().collect::<Vec<_>>().join(" "))),
            Some(_) => return Err(format!("{what}: rejected without a witness")),
            None => return Err(format!("{what}: accepted")),
        }
    }
    Ok(out.join(" | "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("validation, consistency and double dual", validation_and_duality),
        ("genus, punctures and vertex count", surface_counts),
        ("corner structures and hull edges", polytope_structure),
        ("Jacobi canonical forms", jacobi_canonical_forms),
        ("Hochschild complex", complex_property),
        ("graded comparison up to winding 10", graded_comparison),
        ("singularity report", singularity),
        ("corrupted inputs are rejected", negative_controls),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: pass: {title}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL: {title}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
