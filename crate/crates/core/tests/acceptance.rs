//! Acceptance criteria. Each test prints exactly one `criterion N: PASS|FAIL`
//! line before asserting, so `cargo test -- --nocapture` gives a summary.

use std::collections::BTreeSet;
use std::time::Instant;

use qgw::coideal::{
    brute_force_coideals, count_comparison, embeddable_classification, group_like_comodules, LabelMatcher, MatchResult,
};
use qgw::corep::{frobenius_dims, irreducible_reps, m2_action, module_to_comodule, subgroup_characters, subgroup_shape, transport, Comodule, Irreps};
use qgw::ergodic::{classify_ergodic, ActionLabel};
use qgw::groups::{dihedral_order, function_algebra, group_algebra, make_group, subgroups, GroupKind};
use qgw::hopf::{check_cqg, is_kac, HopfAlgebraData};
use qgw::o2sym::{
    branch_cross_check, dinf_tame_mult, embeddable_table, induced_mult, scan_regular_candidates, InducingModule, O2Label, O2Subgroup, Param,
    Verdict,
};
use qgw::twist::{check_o2_relations, dihedral_minus_one_full, klein_cocycle, twist, verify_cocycle, Cocycle};

fn report(n: usize, ok: bool, detail: String) {
    println!("criterion {}: {} ({})", n, if ok { "PASS" } else { "FAIL" }, detail);
    assert!(ok, "criterion {} failed: {}", n, detail);
}

fn twisted_irreps(k: usize, h: &HopfAlgebraData) -> Irreps {
    let g = make_group(GroupKind::Dihedral(k));
    let comodules = irreducible_reps(&g, dihedral_order(k)).unwrap().iter().map(|r| Comodule::from_rep(h, r)).collect();
    Irreps::new(h, comodules).unwrap()
}

#[test]
fn criterion_01_axiom_suite() {
    let t0 = Instant::now();
    let margin = 2f64.powi(-64);
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in [2usize, 4, 6, 8] {
        let g = make_group(GroupKind::Dihedral(k));
        let order = dihedral_order(k);
        let algebras = [
            ("F", function_algebra(&g, order)),
            ("C", group_algebra(&g, order)),
            ("twisted", dihedral_minus_one_full(k).unwrap().hopf),
        ];
        for (name, h) in algebras {
            let cert = check_cqg(&h);
            checked += 1;
            if !cert.passed() || !(cert.min_pivot > margin) || !(cert.lambda_min > margin) {
                failures.push(format!("{}(D_{}): {:?} pivot {:e}", name, k, cert.failures, cert.min_pivot));
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    let ok = failures.is_empty() && secs < 30.0;
    report(1, ok, format!("{} algebras, failures {:?}, {:.1}s", checked, failures, secs));
}

#[test]
fn criterion_02_twist_correctness() {
    let mut problems = Vec::new();
    for k in [4usize, 6, 8] {
        let d = dihedral_minus_one_full(k).unwrap();
        if !d.classical.is_commutative() {
            problems.push(format!("F(D_{}) is noncommutative", k));
        }
        if d.hopf.is_commutative() {
            problems.push(format!("(D_{})_-1 is commutative", k));
        }
        if !is_kac(&d.hopf).unwrap() {
            problems.push(format!("(D_{})_-1 is not of Kac type", k));
        }
        if k != 6 {
            let rep = check_o2_relations(&d.hopf, &d.generators);
            for r in rep.results.iter().filter(|r| !r.passed) {
                problems.push(format!("K={} relation {} fails at {:?}", k, r.relation, r.witness));
            }
        }
    }
    report(2, problems.is_empty(), if problems.is_empty() { "K = 4, 6, 8".into() } else { problems.join("; ") });
}

#[test]
fn criterion_03_cocycle_validity() {
    let klein = make_group(GroupKind::Klein);
    let h = group_algebra(&klein, 4);
    let lam = klein_cocycle(true, 4);
    let identity = verify_cocycle(&h, &lam);
    // Coboundaries on an abelian group are symmetric; this one is not.
    let asymmetric = lam.table[1].get(2) != lam.table[2].get(1);
    let mut trivial_ok = true;
    for k in [2usize, 4, 6, 8] {
        let f = function_algebra(&make_group(GroupKind::Dihedral(k)), dihedral_order(k));
        let t = twist(&f, &Cocycle::trivial(&f)).unwrap();
        trivial_ok &= t.algebra.mult == f.algebra.mult;
    }
    let ok = identity.is_ok() && asymmetric && trivial_ok;
    report(3, ok, format!("identity on 64 triples {:?}, non-coboundary {}, trivial twist exact {}", identity, asymmetric, trivial_ok));
}

#[test]
fn criterion_04_frobenius_reciprocity() {
    let t0 = Instant::now();
    let mut equal = 0;
    let mut unequal = Vec::new();
    for k in [4usize, 6, 8] {
        let g = make_group(GroupKind::Dihedral(k));
        let n = dihedral_order(k);
        let irr = irreducible_reps(&g, n).unwrap();
        for sub in subgroups(&g) {
            let mut ws = subgroup_characters(&g, &sub, n).unwrap();
            let shape = subgroup_shape(&g, &sub).unwrap();
            if shape.is_dihedral() {
                for l in 1..=shape.k() / 2 {
                    ws.push(m2_action(&g, &sub, l, n).unwrap().rep);
                }
            }
            for v in &irr {
                for w in &ws {
                    let (a, b) = frobenius_dims(v, &sub, w).unwrap();
                    if a == b {
                        equal += 1;
                    } else {
                        unequal.push(format!("K={} {} {:?} {}: {} vs {}", k, v.label, sub, w.label, a, b));
                    }
                }
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    let ok = unequal.is_empty() && equal >= 200 && secs < 60.0;
    report(4, ok, format!("{} equalities, {} mismatches, {:.1}s", equal, unequal.len(), secs));
}

#[test]
fn criterion_05_just_two_regular_candidates() {
    let hits = scan_regular_candidates(12, 6, 24).unwrap();
    let expected = vec![O2Label::Alpha { k: Param::Finite(1) }, O2Label::Beta { k: Param::Finite(2), l: 1 }];
    let names: Vec<String> = hits.iter().map(|l| l.to_string()).collect();
    report(5, hits == expected, format!("found {:?}", names));
}

#[test]
fn criterion_06_finite_classification_against_table() {
    let mut diffs = Vec::new();
    for big_k in [4usize, 8] {
        // Dihedral subgroups that are not conjugate in D_K become conjugate in
        // O(2), so a primed label counts as its unprimed O(2) parameter.
        let finite: BTreeSet<ActionLabel> = embeddable_classification(big_k, true)
            .unwrap()
            .labels()
            .into_iter()
            .map(|l| match l {
                ActionLabel::Beta { k, l, .. } => ActionLabel::Beta { k, l, alt: false },
                a => a,
            })
            .collect();
        let table: BTreeSet<ActionLabel> = embeddable_table(big_k, big_k / 2)
            .into_iter()
            .filter(|e| e.verdict == Verdict::Embeddable)
            .filter_map(|e| e.label.finite())
            .filter(|l| big_k % l.k() == 0)
            .collect();
        let only_finite: Vec<String> = finite.difference(&table).map(|l| l.to_string()).collect();
        let only_table: Vec<String> = table.difference(&finite).map(|l| l.to_string()).collect();
        if !only_finite.is_empty() || !only_table.is_empty() {
            diffs.push(format!("K={}: only in finite classification {:?}, only in table {:?}", big_k, only_finite, only_table));
        }
    }
    report(6, diffs.is_empty(), if diffs.is_empty() { "K = 4, 8 agree".into() } else { diffs.join("; ") });
}

#[test]
fn criterion_07_oracle_equivalence() {
    let t0 = Instant::now();
    let mut problems = Vec::new();

    // Classical function algebras: one coideal per subgroup, of dimension [G:H].
    for kind in [GroupKind::Dihedral(2), GroupKind::Klein] {
        let g = make_group(kind);
        let h = function_algebra(&g, 4);
        let irr = Irreps::new(&h, irreducible_reps(&g, 4).unwrap().iter().map(|r| Comodule::from_rep(&h, r)).collect()).unwrap();
        let mut found: Vec<usize> = brute_force_coideals(&h, &irr).unwrap().iter().map(|c| c.dim()).collect();
        let mut expected: Vec<usize> = subgroups(&g).iter().map(|s| g.order() / s.len()).collect();
        found.sort_unstable();
        expected.sort_unstable();
        if found != expected {
            problems.push(format!("F({:?}): dims {:?}, expected {:?}", kind, found, expected));
        }
    }

    // Group algebra of an abelian group: one coideal ℂH per subgroup H.
    let z4 = make_group(GroupKind::Cyclic(4));
    let h = group_algebra(&z4, 4);
    let irr = Irreps::new(&h, group_like_comodules(&h)).unwrap();
    let mut found: Vec<usize> = brute_force_coideals(&h, &irr).unwrap().iter().map(|c| c.dim()).collect();
    let mut expected: Vec<usize> = subgroups(&z4).iter().map(|s| s.len()).collect();
    found.sort_unstable();
    expected.sort_unstable();
    if found != expected {
        problems.push(format!("CZ4: dims {:?}, expected {:?}", found, expected));
    }

    // Twisted algebras: every coideal is identified, and the labels are the classified ones.
    let mut censuses = Vec::new();
    for k in [2usize, 4] {
        let m = LabelMatcher::new(k, true).unwrap();
        let all = brute_force_coideals(&m.hopf, &m.irreps).unwrap();
        let mut seen = BTreeSet::new();
        for c in &all {
            match m.identify(c) {
                MatchResult::Unique(l) => {
                    seen.insert(l);
                }
                other => problems.push(format!("(D_{})_-1 coideal of dim {}: {:?}", k, c.dim(), other)),
            }
        }
        let classified: BTreeSet<ActionLabel> =
            embeddable_classification(k, true).unwrap().classes.iter().map(|c| c.label).collect();
        if seen != classified {
            problems.push(format!("(D_{})_-1: oracle labels {:?}, classified {:?}", k, seen, classified));
        }
        censuses.push(format!("(D_{})_-1 {} coideals in {} classes", k, all.len(), seen.len()));
    }
    let secs = t0.elapsed().as_secs_f64();
    let ok = problems.is_empty() && secs < 600.0;
    report(7, ok, format!("{}; problems {:?}; {:.1}s", censuses.join(", "), problems, secs));
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

#[test]
fn criterion_08_count_divergence() {
    let ks = [2usize, 4, 6, 8, 12, 16, 24];
    let rows = count_comparison(&ks).unwrap();
    let differ = rows.iter().filter(|r| r.differ).count();
    let equal: Vec<usize> = rows.iter().filter(|r| !r.differ).map(|r| r.big_k).collect();
    let tw = log_log_slope(&rows.iter().map(|r| (r.tau as f64, r.twisted as f64)).collect::<Vec<_>>());
    let cl = log_log_slope(&rows.iter().map(|r| (r.tau as f64, r.classical as f64)).collect::<Vec<_>>());
    let table: Vec<String> = rows.iter().map(|r| format!("K={} tau={} {}/{}", r.big_k, r.tau, r.classical, r.twisted)).collect();
    let ok = differ >= 5 && tw > 1.15 && (cl - 1.0).abs() < 0.05;
    report(
        8,
        ok,
        format!(
            "classical/twisted {}; {} of 7 differ; equal at K = {:?}; log-log slope in tau: classical {:.3}, twisted {:.3}",
            table.join(", "),
            differ,
            equal,
            cl,
            tw
        ),
    );
}

#[test]
fn criterion_09_tame_shadow() {
    let mut checked = 0;
    let mut bad = Vec::new();
    for k in [2usize, 4, 6, 8] {
        for l in (1..=k / 2).filter(|l| l % 2 == 1) {
            let tame = dinf_tame_mult(Param::Finite(k), l, 16).unwrap();
            let induced = induced_mult(O2Subgroup::Dihedral(Param::Finite(k)), InducingModule::M2(l), 16).unwrap();
            checked += 1;
            if tame != induced {
                bad.push(format!("(k={}, l={})", k, l));
            }
        }
    }
    report(9, bad.is_empty(), format!("{} pairs, mismatches {:?}", checked, bad));
}

#[test]
fn criterion_10_branch_rules_match_exact() {
    let mut total = 0;
    let mut bad = Vec::new();
    for k in [4usize, 6, 8, 12] {
        for c in branch_cross_check(k).unwrap() {
            total += 1;
            if !c.agrees() {
                bad.push(format!("K={} {} -> {}", k, c.irr, c.target));
            }
        }
    }
    report(10, bad.is_empty() && total > 0, format!("{} restrictions, mismatches {:?}", total, bad));
}

#[test]
fn criterion_11_transport_invariance() {
    let mut checked = 0;
    let mut bad = Vec::new();
    for k in [4usize, 6] {
        let d = dihedral_minus_one_full(k).unwrap();
        let classical_irr = twisted_irreps(k, &d.classical);
        let twisted_irr = twisted_irreps(k, &d.hopf);
        let back_cocycle = d.cocycle.inverse_on(&d.hopf);
        for a in classify_ergodic(k).unwrap().raw {
            let ca = module_to_comodule(&d.classical, &a.action).unwrap();
            let before = classical_irr.decompose(&d.classical, &ca.comodule).unwrap();
            let t = transport(&ca, &d.cocycle, &d.hopf).unwrap();
            let after = twisted_irr.decompose(&d.hopf, &t.comodule).unwrap();
            let back = transport(&t, &back_cocycle, &d.classical).unwrap();
            checked += 1;
            if before != after || before != a.mult || back.algebra.mult != ca.algebra.mult {
                bad.push(format!("K={} {}", k, a.label));
            }
        }
    }
    report(11, bad.is_empty() && checked > 0, format!("{} actions, failures {:?}", checked, bad));
}
