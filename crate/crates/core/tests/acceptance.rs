//! End-to-end acceptance run: one PASS/FAIL line per criterion.

mod common;

use common::{catalog_groups, oracle_groups, random_element, random_partition, small_groups, Naive};
use permdeg::catalog::{self, Catalog, Mode, Status};
use permdeg::quasiperm::{self, CharClass};
use permdeg::{mu, structure, Budget, PcGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

struct Outcome {
    ok: bool,
    detail: String,
}

fn report(n: u32, title: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = f();
    let took = t.elapsed();
    let in_time = took <= limit;
    let ok = out.ok && in_time;
    println!(
        "criterion {n} [{}] {title}: {} ({:.1}s of {}s)",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        took.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn pass_if(problems: Vec<String>, summary: String) -> Outcome {
    if problems.is_empty() {
        Outcome { ok: true, detail: summary }
    } else {
        Outcome { ok: false, detail: format!("{summary}; {}", problems.join("; ")) }
    }
}

fn witnesses() -> Outcome {
    let cat = Catalog::load_default().unwrap();
    let mut problems = Vec::new();
    let mut passed = 0;
    let mut skipped = Vec::new();
    for p in [5, 7] {
        let summary = catalog::verify_all(&cat, p, Mode { exact: false }, &Budget::default()).unwrap();
        for r in &summary.reports {
            match &r.status {
                Status::Pass => passed += 1,
                Status::Skipped(_) => {
                    if p == 5 {
                        skipped.push(r.id.clone())
                    }
                }
                other => problems.push(format!("{} p={p}: {other:?}", r.label())),
            }
        }
    }
    let g21 = skipped.iter().any(|s| s == "G_(2,1)");
    pass_if(
        problems,
        format!(
            "{passed} entry checks passed at p=5,7; {} entries without a printed presentation skipped{}",
            skipped.len(),
            if g21 { " (including G_(2,1))" } else { "" }
        ),
    )
}

fn oracle() -> Outcome {
    let mut problems = Vec::new();
    let mut count = 0;
    for p in [3, 5, 7] {
        for (name, g) in oracle_groups(p) {
            let (m, _) = mu::minimal_degree(&g, &Budget::default()).unwrap();
            let naive = Naive::new(&g).minimal_degree();
            count += 1;
            if m != naive {
                problems.push(format!("{name} p={p}: {m} vs naive {naive}"));
            }
        }
    }
    pass_if(problems, format!("{count} groups of order p^3, p^4 match exhaustive search"))
}

fn c_equals_mu() -> Outcome {
    let cat = Catalog::load_default().unwrap();
    let b = Budget::default();
    let mut problems = Vec::new();
    let mut count = 0;
    let mut groups: Vec<(String, PcGroup)> = Vec::new();
    for p in [3, 5, 7] {
        groups.extend(oracle_groups(p).into_iter().map(|(n, g)| (format!("{n} p={p}"), g)));
    }
    for p in [5, 7] {
        groups.extend(catalog_groups(&cat, p).into_iter().map(|(n, r)| (format!("{n} p={p}"), r.group)));
    }
    for (name, g) in &groups {
        match quasiperm::cross_check_c_mu(g, &b) {
            Ok(x) if x.agree() => count += 1,
            Ok(x) => problems.push(format!("{name}: c={} mu={}", x.c, x.mu)),
            Err(e) => problems.push(format!("{name}: {e}")),
        }
    }
    pass_if(problems, format!("c = mu on {count} of {} groups", groups.len()))
}

fn worked_examples() -> Outcome {
    let cat = Catalog::load_default().unwrap();
    let b = Budget::default();
    let mut problems = Vec::new();
    let mut shown = Vec::new();
    for p in [5u64, 7, 11] {
        let q = p as u128;
        let load = |id: &str| cat.load_entry(id, p, &[]).unwrap().0.group;
        let m33 = mu::minimal_degree(&load("G_(3,3)"), &b).unwrap().0;
        let m323 = mu::minimal_degree(&load("G_(3,23)"), &b).unwrap().0;
        let c428 = quasiperm::minimal_c(&load("G_(4,28)"), &b).unwrap().0;
        for (what, got, want) in
            [("mu(G_(3,3))", m33, q.pow(4)), ("mu(G_(3,23))", m323, 2 * q * q + q), ("c(G_(4,28))", c428, q.pow(3) + 2 * q * q)]
        {
            shown.push(format!("{what}={got}"));
            if got != want {
                problems.push(format!("{what} at p={p}: {got} != {want}"));
            }
        }
    }
    pass_if(problems, shown.join(" "))
}

fn abelian_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let b = Budget::default();
    let mut problems = Vec::new();
    for _ in 0..100 {
        let p = [3u64, 5, 7, 11][rng.gen_range(0..4)];
        let inv = random_partition(&mut rng, 6);
        let g = PcGroup::abelian(p, &inv).unwrap();
        let want: u128 = inv.iter().map(|&k| (p as u128).pow(k)).sum();
        let m = mu::minimal_degree(&g, &b).unwrap().0;
        let c = quasiperm::minimal_c(&g, &b).unwrap().0;
        if m != want || c != want {
            problems.push(format!("p={p} {inv:?}: mu={m} c={c} want {want}"));
        }
    }
    pass_if(problems, "100 random abelian groups".into())
}

fn properties() -> Outcome {
    let b = Budget::default();
    let cat = Catalog::load_default().unwrap();
    let mut problems = Vec::new();

    // Constituent counts on optimal certificates.
    let mut certs = 0;
    let mut groups: Vec<(String, PcGroup)> = Vec::new();
    for p in [3, 5] {
        groups.extend(small_groups(p).into_iter().map(|(n, g)| (format!("{n} p={p}"), g)));
    }
    for p in [5, 7] {
        groups.extend(catalog_groups(&cat, p).into_iter().map(|(n, r)| (format!("{n} p={p}"), r.group)));
    }
    for (name, g) in &groups {
        let d = structure::rank_d(g, &structure::center(g));
        let (_, rs) = mu::minimal_degree(g, &b).unwrap();
        let (_, qc) = quasiperm::minimal_c(g, &b).unwrap();
        certs += 2;
        if rs.parts.len() != d || qc.classes.len() != d {
            problems.push(format!("{name}: d(Z)={d}, parts {}, classes {}", rs.parts.len(), qc.classes.len()));
        }
    }

    // Additivity on direct products.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut products = 0;
    for p in [3u64, 5] {
        let pool = small_groups(p);
        let mut tries = 0;
        while products < if p == 3 { 10 } else { 20 } && tries < 1000 {
            tries += 1;
            let (na, a) = &pool[rng.gen_range(0..pool.len())];
            let (nb, bg) = &pool[rng.gen_range(0..pool.len())];
            if a.n() + bg.n() > 6 {
                continue;
            }
            let prod = a.direct_product(bg).unwrap();
            let sum_mu = mu::minimal_degree(a, &b).unwrap().0 + mu::minimal_degree(bg, &b).unwrap().0;
            let m = mu::minimal_degree(&prod, &b).unwrap().0;
            let c = quasiperm::minimal_c(&prod, &b).unwrap().0;
            products += 1;
            if m != sum_mu || c != sum_mu {
                problems.push(format!("{na} x {nb} p={p}: mu={m} c={c} sum={sum_mu}"));
            }
        }
    }

    // Bounds and value sets on every computed p^6 value.
    let mut bounded = 0;
    for p in [5, 7] {
        for (name, r) in catalog_groups(&cat, p) {
            let g = &r.group;
            if g.n() != 6 {
                continue;
            }
            let (c, qc) = quasiperm::minimal_c(g, &b).unwrap();
            for bc in quasiperm::bound_oracles(g, c, Some(&qc), &b).unwrap() {
                bounded += 1;
                if !bc.holds {
                    problems.push(format!("{name} p={p}: {} {}", bc.name, bc.detail));
                }
            }
        }
    }

    // Kernel identity and irreducibility criteria on every character class.
    let mut classes = 0;
    for p in [3, 5] {
        for (name, g) in small_groups(p) {
            let naive = Naive::new(&g);
            let index_of = |x: &permdeg::Element| naive.index(x);
            for h in structure::subgroups_up_to_conjugacy(&g, 0, &b).unwrap() {
                for k in quasiperm::cyclic_quotient_kernels(&g, &h) {
                    let cc = CharClass::new(h.clone(), k.clone());
                    classes += 1;
                    let mut kset = naive.empty();
                    for x in structure::elements_of(&g, &k) {
                        Naive::insert(&mut kset, index_of(&x));
                    }
                    let mut kernel = naive.empty();
                    for x in structure::elements_of(&g, &quasiperm::induced_kernel(&g, &cc)) {
                        Naive::insert(&mut kernel, index_of(&x));
                    }
                    if kernel != naive.full_core(&kset) {
                        problems.push(format!("{name} p={p} {}: kernel", cc.format(&g)));
                    }
                    let norm = quasiperm::verify_norm(&g, &cc, &b).unwrap();
                    let irr = quasiperm::induced_irreducible(&g, &cc);
                    if irr != (norm == 1.into()) {
                        problems.push(format!("{name} p={p} {}: mackey {irr}, norm {norm}", cc.format(&g)));
                    }
                }
            }
        }
    }

    // m(xi) on optimal certificates.
    let mut mxi = 0;
    for p in [3, 5] {
        for (name, g) in small_groups(p) {
            let (c, qc) = quasiperm::minimal_c(&g, &b).unwrap();
            let got = quasiperm::m_xi(&g, &qc, &b).unwrap();
            let dsum: u128 = qc.classes.iter().map(|cc| cc.d_value(&g)).sum();
            mxi += 1;
            let pm1 = (p - 1) as u128;
            if !dsum.is_multiple_of(pm1) || got != (dsum / pm1) as i128 || c != dsum + dsum / pm1 {
                problems.push(format!("{name} p={p}: m={got}, sum d={dsum}, c={c}"));
            }
        }
    }

    pass_if(
        problems,
        format!("{certs} certificates, {products} products, {bounded} bound checks, {classes} character classes, {mxi} m(xi) checks"),
    )
}

fn consistency() -> Outcome {
    let cat = Catalog::load_default().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    let mut problems = Vec::new();
    let mut groups = 0;
    for p in [5, 7, 97] {
        for (name, r) in catalog_groups(&cat, p) {
            let g = &r.group;
            groups += 1;
            let v = g.consistency_check();
            if !v.is_empty() {
                problems.push(format!("{name} p={p}: {} consistency violations", v.len()));
            }
            for _ in 0..10_000 {
                let (a, x, c) = (random_element(g, &mut rng), random_element(g, &mut rng), random_element(g, &mut rng));
                if g.mul(&g.mul(&a, &x), &c) != g.mul(&a, &g.mul(&x, &c)) {
                    problems.push(format!("{name} p={p}: associativity"));
                    break;
                }
            }
        }
    }
    let summary = catalog::verify_all(&cat, 97, Mode { exact: false }, &Budget::default()).unwrap();
    for r in summary.failures() {
        problems.push(format!("{} p=97: {:?}", r.label(), r.status));
    }
    let faithful = summary.count(|s| *s == Status::Pass);
    pass_if(problems, format!("{groups} groups consistent and associative; {faithful} witnesses faithful at p=97"))
}

#[test]
fn acceptance() {
    let results = [
        report(1, "catalog witnesses at p=5,7", Duration::from_secs(60), witnesses),
        report(2, "minimal degree vs exhaustive search", Duration::from_secs(300), oracle),
        report(3, "c equals mu", Duration::from_secs(600), c_equals_mu),
        report(4, "worked examples at p=5,7,11", Duration::from_secs(120), worked_examples),
        report(5, "abelian formula", Duration::from_secs(300), abelian_formula),
        report(6, "property suites", Duration::from_secs(600), properties),
        report(7, "consistency at p=5,7,97", Duration::from_secs(300), consistency),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    assert!(results.iter().all(|&r| r));
}
