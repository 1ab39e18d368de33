//! Minimal faithful quasi-permutation degree through monomial characters.
//!
//! A Galois class of irreducible characters induced from linear characters
//! is given by a pair `(H, K)` with `K = ker λ` and `H/K` cyclic. Its
//! rational sum contributes `|G:K|` to the degree. A useful class meets
//! `Ω = Ω1(Z(G))` in a hyperplane, and `K` is then a maximal subgroup of
//! `KΩ`, so the search runs over the same levels of `L ⊇ Ω` as the
//! permutation-degree search, admitting a functional on `Ω` only once some
//! `K` with that trace is realised by an irreducible induced character.

use crate::collect::{Element, PcGroup};
use crate::error::{Error, Result};
use crate::linalg;
use crate::mu::{self, Levels, RepSet, Socle};
use crate::structure::{self, QuotientCoords, Subgroup};
use crate::Budget;
use num_rational::Ratio;
use std::collections::{BTreeMap, HashSet};

/// Galois class of characters induced from a faithful linear character of `h/k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharClass {
    pub h: Subgroup,
    pub k: Subgroup,
}

impl CharClass {
    pub fn new(h: Subgroup, k: Subgroup) -> CharClass {
        CharClass { h, k }
    }

    /// `a` with `|H:K| = p^a`.
    pub fn log_conductor(&self) -> usize {
        self.h.log_order() - self.k.log_order()
    }

    /// `|H:K|`.
    pub fn conductor(&self, g: &PcGroup) -> u128 {
        (g.p() as u128).pow(self.log_conductor() as u32)
    }

    /// Character degree `|G:H|`.
    pub fn induced_degree(&self, g: &PcGroup) -> u128 {
        self.h.index(g)
    }

    /// Degree times Galois class size: `|G:H| · φ(p^a)`.
    pub fn d_value(&self, g: &PcGroup) -> u128 {
        let a = self.log_conductor() as u32;
        let p = g.p() as u128;
        let phi = if a == 0 { 1 } else { p.pow(a - 1) * (p - 1) };
        self.induced_degree(g) * phi
    }

    /// Contribution `|G:K|` to the quasi-permutation degree.
    pub fn weight(&self, g: &PcGroup) -> u128 {
        self.k.index(g)
    }

    /// Whether `(H, K)` is well formed: `K ⊴ H` with `H/K` cyclic.
    pub fn is_valid(&self, g: &PcGroup) -> bool {
        structure::is_subgroup(g, &self.h, &self.k)
            && structure::is_normalized_by(g, &self.k, &self.h)
            && structure::is_cyclic_quotient(g, &self.h, &self.k)
    }

    pub fn format(&self, g: &PcGroup) -> String {
        format!("H={} K={}", self.h.format(g), self.k.format(g))
    }
}

/// Certificate for `c(G)`: one class per independent socle direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiCert {
    pub classes: Vec<CharClass>,
    pub c_value: u128,
}

impl QuasiCert {
    pub fn new(g: &PcGroup, classes: Vec<CharClass>) -> QuasiCert {
        let c_value = if g.n() == 0 { 1 } else { classes.iter().map(|c| c.weight(g)).sum() };
        QuasiCert { classes, c_value }
    }
}

/// A faithful linear character of `h/k`, valued as exponents of a
/// primitive `|H:K|`-th root of unity.
pub struct LinearChar {
    modulus: u128,
    /// Per layer `M_j/M_{j+1}`: coordinates, step element `h0^{p^j}` and
    /// inverse of its coordinate.
    layers: Vec<(QuotientCoords, Element, u64)>,
    p: u64,
}

impl LinearChar {
    pub fn new(g: &PcGroup, cc: &CharClass) -> LinearChar {
        let p = g.p();
        let a = cc.log_conductor();
        let modulus = (p as u128).pow(a as u32);
        let mut layers = Vec::with_capacity(a);
        if a > 0 {
            let below = structure::join(g, &cc.k, &structure::frattini(g, &cc.h));
            let h0 = *cc.h.basis().iter().find(|b| !structure::contains(g, &below, b)).expect("generator of a nontrivial cyclic quotient");
            let mut step = h0;
            let mut upper = cc.h.clone();
            for _ in 0..a {
                let next_step = g.pow(&step, p as i128);
                let lower = structure::extend(g, &cc.k, &[next_step]);
                let q = QuotientCoords::new(g, &upper, &lower);
                let t = q.coords(g, &step)[0];
                layers.push((q, step, crate::primes::inv_mod(t, p)));
                upper = lower;
                step = next_step;
            }
        }
        LinearChar { modulus, layers, p }
    }

    /// Order of the value group.
    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// `e` with `λ(y) = ζ^e`, for `y ∈ H`.
    pub fn exponent(&self, g: &PcGroup, y: &Element) -> u128 {
        let mut y = *y;
        let mut e: u128 = 0;
        let mut scale: u128 = 1;
        for (q, step, inv) in &self.layers {
            let digit = q.coords(g, &y)[0] * inv % self.p;
            if digit != 0 {
                y = g.mul(&y, &g.pow(step, -(digit as i128)));
            }
            e += digit as u128 * scale;
            scale *= self.p as u128;
        }
        e % self.modulus
    }
}

/// All `K ≤ h` with `h/K` cyclic, the full subgroup included.
pub fn cyclic_quotient_kernels(g: &PcGroup, h: &Subgroup) -> Vec<Subgroup> {
    let der = structure::derived_of(g, h);
    let mut out = vec![h.clone()];
    let mut level = vec![h.clone()];
    let mut seen: HashSet<Subgroup> = HashSet::new();
    while !level.is_empty() {
        let mut next = Vec::new();
        for k in &level {
            for m in structure::maximal_subgroups_containing(g, k, &der) {
                if structure::is_cyclic_quotient(g, h, &m) && seen.insert(m.clone()) {
                    next.push(m);
                }
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Elements of `N_G(H)` fixing `K` and acting trivially on `H/K`.
pub fn inertia_group(g: &PcGroup, cc: &CharClass, budget: &Budget) -> Result<Subgroup> {
    let n = structure::normalizer(g, &cc.h, budget)?;
    let below = structure::join(g, &cc.k, &structure::frattini(g, &cc.h));
    let h0 = cc.h.basis().iter().copied().find(|b| !structure::contains(g, &below, b)).unwrap_or_else(|| g.identity());
    let point = (cc.k.clone(), structure::coset_rep(g, &cc.k, &h0));
    structure::stabilizer(
        g,
        &n,
        point,
        |(k, r), x| {
            let kx = structure::conjugate(g, k, x);
            let rx = structure::coset_rep(g, &kx, &g.conj(r, x));
            (kx, rx)
        },
        budget,
    )
}

/// Whether `λ↑G` is irreducible, by Mackey's criterion over the cosets of `H`.
pub fn induced_irreducible(g: &PcGroup, cc: &CharClass) -> bool {
    let lam = LinearChar::new(g, cc);
    structure::coset_reps(g, &cc.h).iter().filter(|x| !structure::contains(g, &cc.h, x)).all(|x| {
        let hx = structure::conjugate(g, &cc.h, x);
        let j = structure::intersection(g, &cc.h, &hx);
        let xi = g.inv(x);
        j.basis().iter().any(|y| lam.exponent(g, y) != lam.exponent(g, &g.conj(y, &xi)))
    })
}

/// Kernel of `λ↑G`, which is the core of `K`.
pub fn induced_kernel(g: &PcGroup, cc: &CharClass) -> Subgroup {
    structure::core(g, &cc.k)
}

/// Trace of `ζ^j` from the field of `n`-th roots of unity, `n = p^a`.
fn root_trace(j: u128, n: u128, p: u128) -> i128 {
    if n == 1 || j.is_multiple_of(n) {
        return if n == 1 { 1 } else { (n / p * (p - 1)) as i128 };
    }
    if j.is_multiple_of(n / p) {
        -((n / p) as i128)
    } else {
        0
    }
}

fn euler_phi(n: u128, p: u128) -> u128 {
    if n == 1 {
        1
    } else {
        n / p * (p - 1)
    }
}

/// Values of `λ↑G` as multiplicity maps over powers of `ζ`.
struct Induced {
    lam: LinearChar,
    reps: Vec<Element>,
}

impl Induced {
    fn new(g: &PcGroup, cc: &CharClass) -> Induced {
        Induced { lam: LinearChar::new(g, cc), reps: structure::coset_reps(g, &cc.h) }
    }

    fn value(&self, g: &PcGroup, h: &Subgroup, y: &Element) -> BTreeMap<u128, i128> {
        let mut v = BTreeMap::new();
        for t in &self.reps {
            let c = g.conj(y, &g.inv(t));
            if structure::contains(g, h, &c) {
                *v.entry(self.lam.exponent(g, &c)).or_insert(0) += 1;
            }
        }
        v
    }
}

fn check_elements(work: u128, budget: &Budget) -> Result<()> {
    if work > budget.max_elements as u128 {
        return Err(Error::BudgetExhausted { count: work.min(u64::MAX as u128) as u64, best_bound: None });
    }
    Ok(())
}

/// Exact `⟨χ, χ⟩` for `χ = λ↑G`, summed over all group elements.
pub fn verify_norm(g: &PcGroup, cc: &CharClass, budget: &Budget) -> Result<Ratio<i128>> {
    check_elements(g.order() * cc.induced_degree(g), budget)?;
    let ind = Induced::new(g, cc);
    let n = ind.lam.modulus();
    let p = g.p() as u128;
    let mut s = vec![0i128; n as usize];
    for y in g.elements() {
        let v = ind.value(g, &cc.h, &y);
        for (i, ci) in &v {
            for (j, cj) in &v {
                s[((i + n - j) % n) as usize] += ci * cj;
            }
        }
    }
    let tr: i128 = s.iter().enumerate().map(|(j, c)| c * root_trace(j as u128, n, p)).sum();
    Ok(Ratio::new(tr, (euler_phi(n, p) * g.order()) as i128))
}

/// `-min ξ(y)` for `ξ` the sum of all Galois conjugates of the certificate's characters.
pub fn m_xi(g: &PcGroup, cert: &QuasiCert, budget: &Budget) -> Result<i128> {
    let work: u128 = cert.classes.iter().map(|c| c.induced_degree(g)).sum::<u128>() * g.order();
    check_elements(work, budget)?;
    let p = g.p() as u128;
    let inds: Vec<Induced> = cert.classes.iter().map(|c| Induced::new(g, c)).collect();
    let mut min = i128::MAX;
    for y in g.elements() {
        let mut xi = 0i128;
        for (cc, ind) in cert.classes.iter().zip(&inds) {
            let n = ind.lam.modulus();
            xi += ind.value(g, &cc.h, &y).iter().map(|(j, c)| c * root_trace(*j, n, p)).sum::<i128>();
        }
        min = min.min(xi);
    }
    Ok(-min)
}

/// Solutions `ψ` on `L/Φ(L)` whose restriction to `Ω` is `phi`.
fn lifts(g: &PcGroup, q: &QuotientCoords, socle: &Socle, phi: &[u64]) -> (Vec<u64>, Vec<Vec<u64>>) {
    let p = g.p();
    let r = q.rank();
    let rows: Vec<Vec<u64>> = socle
        .coords
        .gens
        .iter()
        .zip(phi)
        .map(|(x, &f)| {
            let mut row = q.coords(g, x);
            row.push((p - f % p) % p);
            row
        })
        .collect();
    let mut null = linalg::nullspace(&rows, r + 1, p);
    let pos = null.iter().position(|v| v[r] != 0).expect("functional vanishing on Φ(L) ∩ Ω lifts");
    let mut base = null.remove(pos);
    let inv = crate::primes::inv_mod(base[r], p);
    base.iter_mut().for_each(|x| *x = *x * inv % p);
    let free: Vec<Vec<u64>> = null
        .into_iter()
        .map(|mut v| {
            let t = v[r];
            for (x, b) in v.iter_mut().zip(&base) {
                *x = (*x + (p - t) * b) % p;
            }
            v.truncate(r);
            v
        })
        .collect();
    base.truncate(r);
    (base, free)
}

fn combos<'a>(base: &'a [u64], free: &'a [Vec<u64>], p: u64) -> impl Iterator<Item = Vec<u64>> + 'a {
    let total = (p as u128).pow(free.len() as u32);
    (0..total).map(move |mut idx| {
        let mut v = base.to_vec();
        for f in free {
            let c = (idx % p as u128) as u64;
            idx /= p as u128;
            for (x, y) in v.iter_mut().zip(f) {
                *x = (*x + c * y) % p;
            }
        }
        v
    })
}

/// A class with kernel `k` whose induced character is irreducible, if any.
pub fn realize_kernel(g: &PcGroup, k: &Subgroup, budget: &Budget) -> Result<Option<CharClass>> {
    let z = structure::center(g);
    let zk = structure::join(g, &z, k);
    if !structure::is_cyclic_quotient(g, &zk, k) {
        return Ok(None);
    }
    let max_log_index = (g.n() - z.log_order()) / 2;
    let n = structure::normalizer(g, k, budget)?;
    check_elements(n.order(g) / zk.order(g), budget)?;
    let mut cands: HashSet<Subgroup> = HashSet::new();
    for h in structure::transversal(g, &n, &zk) {
        let hs = structure::extend(g, &zk, &[h]);
        if hs.log_index(g) <= max_log_index && structure::is_cyclic_quotient(g, &hs, k) {
            cands.insert(hs);
        }
    }
    let mut cands: Vec<Subgroup> = cands.into_iter().collect();
    cands.sort_by(|a, b| b.log_order().cmp(&a.log_order()).then(a.cmp(b)));
    for h in cands {
        let cc = CharClass::new(h, k.clone());
        if induced_irreducible(g, &cc) {
            return Ok(Some(cc));
        }
    }
    Ok(None)
}

/// Exact `c(G)` with an optimal certificate.
pub fn minimal_c(g: &PcGroup, budget: &Budget) -> Result<(u128, QuasiCert)> {
    if g.n() == 0 {
        return Ok((1, QuasiCert::new(g, vec![])));
    }
    let p = g.p();
    let socle = Socle::new(g);
    let d = socle.dim();
    let worst = d as u128 * p as u128 * g.order() / socle.omega.order(g);
    let exhausted = |count: u64| Error::BudgetExhausted { count, best_bound: Some(worst.min(u64::MAX as u128) as u64) };
    let mut span: Vec<Vec<u64>> = Vec::new();
    let mut classes = Vec::new();
    let mut tried: u64 = 0;
    let mut levels = Levels::new(g, &socle.omega);
    loop {
        for l in &levels.level {
            let frat = structure::frattini(g, l);
            let d_l = structure::intersection(g, &frat, &socle.omega);
            let ann = socle.annihilator(g, &d_l);
            if linalg::rank(&ann.iter().chain(&span).cloned().collect::<Vec<_>>(), p) == span.len() {
                continue;
            }
            let q = QuotientCoords::new(g, l, &frat);
            for phi in linalg::projective_points(&ann, p) {
                if linalg::in_span(&span, &phi, p) {
                    continue;
                }
                let (base, free) = lifts(g, &q, &socle, &phi);
                for psi in combos(&base, &free, p) {
                    tried += 1;
                    if tried > budget.max_subgroups {
                        return Err(exhausted(tried));
                    }
                    let k = structure::functional_kernel(g, &frat, &q, &psi);
                    let found = match realize_kernel(g, &k, budget) {
                        Err(Error::BudgetExhausted { count, .. }) => return Err(exhausted(count)),
                        other => other?,
                    };
                    if let Some(cc) = found {
                        classes.push(cc);
                        span.push(phi.clone());
                        break;
                    }
                }
                if span.len() == d {
                    let cert = QuasiCert::new(g, classes);
                    return Ok((cert.c_value, cert));
                }
            }
        }
        match levels.advance(budget) {
            Ok(true) => {}
            Ok(false) => return Err(Error::InvalidPc("no irreducible induced character found for a socle direction".into())),
            Err(Error::BudgetExhausted { count, .. }) => return Err(exhausted(count)),
            Err(e) => return Err(e),
        }
    }
}

/// Outcome of computing both degrees.
#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub mu: u128,
    pub c: u128,
    pub mu_cert: RepSet,
    pub c_cert: QuasiCert,
}

impl CrossCheck {
    pub fn agree(&self) -> bool {
        self.mu == self.c
    }
}

/// Computes `μ(G)` and `c(G)` independently.
pub fn cross_check_c_mu(g: &PcGroup, budget: &Budget) -> Result<CrossCheck> {
    let (mu, mu_cert) = mu::minimal_degree(g, budget)?;
    let (c, c_cert) = minimal_c(g, budget)?;
    Ok(CrossCheck { mu, c, mu_cert, c_cert })
}

/// Whether a quasi-permutation certificate is valid: each induced character
/// is irreducible, kernels intersect trivially, and the value is the sum of
/// `|G:K|`.
pub fn check_cert(g: &PcGroup, cert: &QuasiCert) -> std::result::Result<(), String> {
    let mut ker = structure::whole(g);
    for cc in &cert.classes {
        if !cc.is_valid(g) {
            return Err(format!("malformed class {}", cc.format(g)));
        }
        if !induced_irreducible(g, cc) {
            return Err(format!("reducible induced character {}", cc.format(g)));
        }
        ker = structure::intersection(g, &ker, &induced_kernel(g, cc));
    }
    if g.n() > 0 && !ker.is_trivial() {
        return Err(format!("kernels intersect in {}", ker.format(g)));
    }
    let sum: u128 = cert.classes.iter().map(|c| c.weight(g)).sum();
    if g.n() > 0 && sum != cert.c_value {
        return Err(format!("value {} differs from sum {}", cert.c_value, sum));
    }
    Ok(())
}

/// A bound evaluated against a computed value.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

fn ilog(mut x: u128, p: u128) -> u32 {
    let mut k = 0;
    while x >= p {
        x /= p;
        k += 1;
    }
    k
}

/// Whether `G` has a nontrivial abelian direct factor.
pub fn has_abelian_direct_factor(g: &PcGroup, budget: &Budget) -> Result<bool> {
    let z = structure::center(g);
    check_elements(z.order(g), budget)?;
    let der = structure::derived(g);
    let p = g.p() as i128;
    for x in structure::elements_of(g, &z) {
        let ord = g.order_of(&x);
        if ord == 1 {
            continue;
        }
        let socle_elt = g.pow(&x, ord as i128 / p);
        if structure::contains(g, &der, &socle_elt) {
            continue;
        }
        let powers: Vec<Element> = g.gens().iter().map(|y| g.pow(y, ord as i128)).collect();
        let pk = structure::extend(g, &der, &powers);
        if !structure::contains(g, &pk, &socle_elt) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Values allowed for nonabelian groups of order `p^6`, `p ≥ 5`, by `|Z(G)|`.
pub fn order_p6_value_set(p: u128, log_center: usize) -> Vec<u128> {
    let q = |k: u32| p.pow(k);
    match log_center {
        4 => vec![
            q(4) + p,
            q(3) + q(2) + p,
            q(3) + q(2),
            q(3) + 2 * p,
            3 * q(2),
            2 * q(2) + 2 * p,
            2 * q(2) + p,
            3 * q(2) + p,
            q(2) + 3 * p,
            q(5),
            q(4) + q(2),
            2 * q(3),
            q(3) + 2 * q(2),
        ],
        3 => vec![
            q(5),
            q(4) + q(3),
            q(4) + q(2),
            q(4) + p,
            q(4),
            2 * q(3) + q(2),
            2 * q(3) + p,
            2 * q(3),
            q(3) + 2 * q(2),
            q(3) + q(2) + p,
            q(3) + q(2),
            q(3) + 2 * p,
            q(3) + p,
            3 * q(2),
            2 * q(2) + p,
            2 * q(2),
            q(2) + 2 * p,
        ],
        2 => vec![q(4), 2 * q(3), q(3) + q(2), q(3) + p, q(3), 2 * q(2), q(2) + p],
        1 => vec![q(4), q(3), q(2)],
        _ => vec![],
    }
}

/// Evaluates every applicable bound on `c(G)`.
pub fn bound_oracles(g: &PcGroup, c: u128, cert: Option<&QuasiCert>, budget: &Budget) -> Result<Vec<BoundCheck>> {
    let mut out = Vec::new();
    if g.n() == 0 {
        return Ok(out);
    }
    let p = g.p() as u128;
    let z = structure::center(g);
    let abelian = z.log_order() == g.n();
    let zo = z.order(g);
    let dz = structure::rank_d(g, &z);
    if structure::is_cyclic_quotient(g, &z, &structure::trivial(g)) {
        let lower = if abelian { zo } else { p * zo };
        let e = ilog(g.order() / zo, p) / 2;
        let upper = p.pow(e) * structure::exponent(g, budget)?;
        out.push(BoundCheck { name: "cyclic-centre", holds: lower <= c && c <= upper, detail: format!("{lower} <= {c} <= {upper}") });
    }
    if !abelian {
        let zd = structure::intersection(g, &z, &structure::derived(g));
        if structure::rank_d(g, &zd) == dz {
            let no_linear = cert.is_none_or(|cert| cert.classes.iter().all(|cc| cc.h.log_index(g) > 0));
            out.push(BoundCheck {
                name: "socle-in-derived",
                holds: c.is_multiple_of(p * p) && no_linear,
                detail: format!("p^2 | {c}, no linear class: {no_linear}"),
            });
        }
        if !has_abelian_direct_factor(g, budget)? {
            out.push(BoundCheck { name: "no-abelian-factor", holds: c.is_multiple_of(p * p), detail: format!("p^2 | {c}") });
        }
        if g.n() == 6 && p >= 5 {
            let set = order_p6_value_set(p, z.log_order());
            out.push(BoundCheck {
                name: "order-p6-value-set",
                holds: set.contains(&c),
                detail: format!("{c} for |Z| = p^{}", z.log_order()),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collect::PcRules;

    fn heis(p: u64) -> PcGroup {
        let mut comm = BTreeMap::new();
        comm.insert((1, 0), vec![0, 0, 1]);
        PcGroup::from_rules(PcRules { p, n: 3, power: vec![vec![0; 3]; 3], comm }).unwrap()
    }

    #[test]
    fn kernel_counts() {
        let g = PcGroup::abelian(5, &[1, 1]).unwrap();
        assert_eq!(cyclic_quotient_kernels(&g, &structure::whole(&g)).len(), 7);
        let g = PcGroup::abelian(5, &[2]).unwrap();
        assert_eq!(cyclic_quotient_kernels(&g, &structure::whole(&g)).len(), 3);
        let g = heis(5);
        let ks = cyclic_quotient_kernels(&g, &structure::whole(&g));
        assert_eq!(ks.len(), 7);
        let z = structure::center(&g);
        assert!(ks.iter().all(|k| structure::is_subgroup(&g, k, &z)));
    }

    #[test]
    fn linear_character_is_homomorphism() {
        let g = PcGroup::abelian(3, &[2, 1]).unwrap();
        let w = structure::whole(&g);
        let b = Budget::default();
        for k in cyclic_quotient_kernels(&g, &w) {
            let cc = CharClass::new(w.clone(), k.clone());
            let lam = LinearChar::new(&g, &cc);
            let n = lam.modulus();
            for x in g.elements() {
                assert_eq!(lam.exponent(&g, &x) == 0, structure::contains(&g, &k, &x));
                for y in g.elements() {
                    let s = (lam.exponent(&g, &x) + lam.exponent(&g, &y)) % n;
                    assert_eq!(lam.exponent(&g, &g.mul(&x, &y)), s);
                }
            }
            assert_eq!(verify_norm(&g, &cc, &b).unwrap(), Ratio::from_integer(1));
            assert_eq!(inertia_group(&g, &cc, &b).unwrap(), w);
        }
    }

    #[test]
    fn extraspecial_classes() {
        let p = 5;
        let g = heis(p);
        let b = Budget::default();
        let z = structure::center(&g);
        let h = structure::closure(&g, &[g.gen(1), g.gen(2)]);
        let k = structure::closure(&g, &[g.gen(1)]);
        let cc = CharClass::new(h.clone(), k.clone());
        assert!(cc.is_valid(&g));
        assert_eq!(inertia_group(&g, &cc, &b).unwrap(), h);
        assert!(induced_irreducible(&g, &cc));
        assert_eq!(verify_norm(&g, &cc, &b).unwrap(), Ratio::from_integer(1));
        assert!(induced_kernel(&g, &cc).is_trivial());
        let triv = CharClass::new(h.clone(), h.clone());
        assert!(!induced_irreducible(&g, &triv));
        assert_eq!(verify_norm(&g, &triv, &b).unwrap(), Ratio::from_integer(p as i128));
        let lin = CharClass::new(structure::whole(&g), h.clone());
        assert!(induced_irreducible(&g, &lin));
        assert_eq!(induced_kernel(&g, &lin), h);
        let (c, cert) = minimal_c(&g, &b).unwrap();
        assert_eq!(c, 25);
        assert_eq!(cert.classes.len(), 1);
        assert!(check_cert(&g, &cert).is_ok());
        assert_eq!(m_xi(&g, &cert, &b).unwrap() as u128, cert.classes[0].d_value(&g) / (p as u128 - 1));
        assert!(structure::is_subgroup(&g, &cert.classes[0].h, &z));
        let bounds = bound_oracles(&g, c, Some(&cert), &b).unwrap();
        assert!(bounds.iter().any(|x| x.name == "cyclic-centre"));
        assert!(bounds.iter().all(|x| x.holds), "{bounds:?}");
    }

    #[test]
    fn abelian_c_matches_formula() {
        let b = Budget::default();
        for (p, inv) in [(3u64, vec![2u32, 1]), (5, vec![1, 1, 1]), (7, vec![2])] {
            let g = PcGroup::abelian(p, &inv).unwrap();
            let (c, cert) = minimal_c(&g, &b).unwrap();
            let expect: u128 = inv.iter().map(|&e| (p as u128).pow(e)).sum();
            assert_eq!(c, expect);
            assert!(check_cert(&g, &cert).is_ok());
        }
    }

    #[test]
    fn degree_identity() {
        let g = heis(3);
        let h = structure::closure(&g, &[g.gen(1), g.gen(2)]);
        for k in cyclic_quotient_kernels(&g, &h).into_iter().filter(|k| *k != h) {
            let cc = CharClass::new(h.clone(), k);
            assert_eq!(3 * cc.d_value(&g), 2 * cc.weight(&g));
        }
    }
}
