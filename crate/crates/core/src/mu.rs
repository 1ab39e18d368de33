//! Minimal faithful permutation degree with certificates.
//!
//! Every nontrivial normal subgroup of a p-group meets `Ω = Ω1(Z(G))`, and
//! for `H ≤ G` the core of `H` meets `Ω` in `H ∩ Ω`. A set of parts is
//! faithful iff these subspaces of `Ω` intersect trivially. The cheapest
//! part whose trace lies in a hyperplane `W` of `Ω` has index
//! `p · min |G:L|` over `Ω ≤ L` with `Φ(L) ∩ Ω ≤ W`, so the optimum is a
//! minimum-weight basis of the dual of `Ω`, found greedily by index level.

use crate::collect::{Element, PcGroup};
use crate::error::{Error, Result};
use crate::linalg;
use crate::structure::{self, QuotientCoords, Subgroup};
use crate::Budget;
use rayon::prelude::*;
use std::collections::HashSet;
use std::fmt::Write as _;

/// Subgroups whose coset actions are summed into one representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSet {
    pub parts: Vec<Subgroup>,
    pub degree: u128,
}

impl RepSet {
    pub fn new(g: &PcGroup, parts: Vec<Subgroup>) -> RepSet {
        let degree = parts.iter().map(|h| h.index(g)).sum::<u128>().max(1);
        RepSet { parts, degree }
    }
}

/// Permutation images of the pc generators, acting on the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermRep {
    pub degree: usize,
    pub images: Vec<Vec<u32>>,
}

impl PermRep {
    /// Image of a point under an element in normal form.
    pub fn apply(&self, g: &PcGroup, pt: u32, x: &Element) -> u32 {
        let mut q = pt;
        for i in 0..g.n() {
            for _ in 0..x.exps()[i] {
                q = self.images[i][q as usize];
            }
        }
        q
    }

    /// Whether `x` acts trivially.
    pub fn fixes_all(&self, g: &PcGroup, x: &Element) -> bool {
        (0..self.degree as u32).all(|q| self.apply(g, q, x) == q)
    }

    /// Checks the pc relations for `g_i^p` and `g_j g_i` with `j > i`.
    pub fn is_homomorphism(&self, g: &PcGroup) -> bool {
        let p = g.p() as usize;
        let n = g.n();
        for q in 0..self.degree as u32 {
            for i in 0..n {
                let mut r = q;
                for _ in 0..p {
                    r = self.images[i][r as usize];
                }
                if r != self.apply(g, q, &g.pow(&g.gen(i), p as i128)) {
                    return false;
                }
                for j in i + 1..n {
                    let lhs = self.images[i][self.images[j][q as usize] as usize];
                    let ji = g.mul(&g.gen(j), &g.gen(i));
                    if lhs != self.apply(g, q, &ji) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Export format: `degree n`, then one 0-based image line per generator.
    pub fn to_text(&self) -> String {
        let mut s = format!("degree {}\n", self.degree);
        for img in &self.images {
            let line: Vec<String> = img.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }
}

/// Action on the disjoint union of the right coset spaces of `parts`.
pub fn coset_action(g: &PcGroup, parts: &[Subgroup], budget: &Budget) -> Result<PermRep> {
    let degree: u128 = parts.iter().map(|h| h.index(g)).sum();
    if degree > budget.max_elements as u128 || degree > u32::MAX as u128 {
        return Err(Error::BudgetExhausted { count: budget.max_elements, best_bound: None });
    }
    let mut images = vec![Vec::with_capacity(degree as usize); g.n()];
    let mut offset = 0u32;
    for h in parts {
        let reps = structure::coset_reps(g, h);
        for (i, img) in images.iter_mut().enumerate() {
            let gi = g.gen(i);
            for r in &reps {
                let y = structure::coset_rep(g, h, &g.mul(r, &gi));
                img.push(offset + structure::coset_index(g, h, &y) as u32);
            }
        }
        offset += reps.len() as u32;
    }
    let rep = PermRep { degree: degree as usize, images };
    debug_assert!(rep.is_homomorphism(g));
    Ok(rep)
}

/// Faithfulness of the summed coset actions, with a kernel element when not faithful.
pub fn is_faithful(g: &PcGroup, parts: &[Subgroup]) -> (bool, Option<Element>) {
    let mut k = structure::whole(g);
    for h in parts {
        k = structure::intersection(g, &k, &structure::core(g, h));
        if k.is_trivial() {
            return (true, None);
        }
    }
    if k.is_trivial() {
        (true, None)
    } else {
        (false, Some(k.basis()[0]))
    }
}

/// Sum of the invariant factors; 1 for the trivial group.
pub fn mu_abelian(invariants: &[u128]) -> u128 {
    if invariants.is_empty() {
        1
    } else {
        invariants.iter().sum()
    }
}

/// Degree of a direct product of nontrivial factors.
pub fn mu_direct_product(mu_h: u128, mu_k: u128) -> u128 {
    mu_h + mu_k
}

/// Coordinates on `Ω` used by the degree searches.
pub(crate) struct Socle {
    pub omega: Subgroup,
    pub coords: QuotientCoords,
}

impl Socle {
    pub fn new(g: &PcGroup) -> Socle {
        let omega = structure::socle_of_center(g);
        let coords = QuotientCoords::new(g, &omega, &structure::trivial(g));
        Socle { omega, coords }
    }
    pub fn dim(&self) -> usize {
        self.coords.rank()
    }
    /// Functionals on `Ω` vanishing on `w ≤ Ω`.
    pub fn annihilator(&self, g: &PcGroup, w: &Subgroup) -> Vec<Vec<u64>> {
        let rows: Vec<Vec<u64>> = w.basis().iter().map(|x| self.coords.coords(g, x)).collect();
        linalg::nullspace(&rows, self.dim(), g.p())
    }
}

/// Subgroups `L ⊇ Ω` of index `p^k`, one level at a time.
pub(crate) struct Levels<'a> {
    g: &'a PcGroup,
    omega: &'a Subgroup,
    pub level: Vec<Subgroup>,
    pub k: usize,
    visited: u64,
}

impl<'a> Levels<'a> {
    pub fn new(g: &'a PcGroup, omega: &'a Subgroup) -> Self {
        Levels { g, omega, level: vec![structure::whole(g)], k: 0, visited: 1 }
    }

    pub fn advance(&mut self, budget: &Budget) -> Result<bool> {
        let (g, omega) = (self.g, self.omega);
        if self.level.is_empty() || self.level[0].log_order() <= omega.log_order() {
            self.level.clear();
            return Ok(false);
        }
        let children: Vec<Vec<Subgroup>> = self.level.par_iter().map(|l| structure::maximal_subgroups_containing(g, l, omega)).collect();
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for c in children.into_iter().flatten() {
            if seen.insert(c.clone()) {
                next.push(c);
            }
        }
        self.visited += next.len() as u64;
        if self.visited > budget.max_subgroups {
            return Err(Error::BudgetExhausted { count: self.visited, best_bound: None });
        }
        next.sort();
        self.level = next;
        self.k += 1;
        Ok(true)
    }
}

/// Maximal subgroup of `l` meeting `Ω` exactly in the kernel of `phi`,
/// given `Φ(l) ∩ Ω ≤ ker phi`.
pub(crate) fn part_for_functional(g: &PcGroup, l: &Subgroup, socle: &Socle, phi: &[u64]) -> Subgroup {
    let p = g.p();
    let w_rows = linalg::nullspace(&[phi.to_vec()], socle.dim(), p);
    let w: Vec<Element> = w_rows.iter().map(|v| socle.coords.element(g, v)).collect();
    let frat = structure::frattini(g, l);
    let q = QuotientCoords::new(g, l, &frat);
    let rows: Vec<Vec<u64>> = w.iter().map(|x| q.coords(g, x)).collect();
    let ann = linalg::nullspace(&rows, q.rank(), p);
    let om: Vec<Vec<u64>> = socle.omega.basis().iter().map(|x| q.coords(g, x)).collect();
    let psi = ann.iter().find(|f| om.iter().any(|v| linalg::dot(f, v, p) != 0)).expect("functional separating the socle exists");
    structure::functional_kernel(g, &frat, &q, psi)
}

/// Exact minimal faithful permutation degree with an optimal certificate.
pub fn minimal_degree(g: &PcGroup, budget: &Budget) -> Result<(u128, RepSet)> {
    if g.n() == 0 {
        return Ok((1, RepSet { parts: vec![], degree: 1 }));
    }
    let p = g.p();
    let socle = Socle::new(g);
    let d = socle.dim();
    let mut span: Vec<Vec<u64>> = Vec::new();
    let mut parts = Vec::new();
    let mut degree: u128 = 0;
    let mut levels = Levels::new(g, &socle.omega);
    loop {
        let cost = (p as u128).pow(levels.k as u32 + 1);
        for l in &levels.level {
            let d_l = structure::intersection(g, &structure::frattini(g, l), &socle.omega);
            for phi in socle.annihilator(g, &d_l) {
                if !linalg::in_span(&span, &phi, p) {
                    parts.push(part_for_functional(g, l, &socle, &phi));
                    span.push(phi);
                    degree += cost;
                }
            }
            if span.len() == d {
                return Ok((degree, RepSet { parts, degree }));
            }
        }
        match levels.advance(budget) {
            Ok(true) => {}
            Ok(false) => unreachable!("L = Ω has Φ(L) ∩ Ω trivial"),
            Err(Error::BudgetExhausted { count, .. }) => {
                let worst = p as u128 * g.order() / socle.omega.order(g);
                let bound = degree + (d - span.len()) as u128 * worst;
                return Err(Error::BudgetExhausted { count, best_bound: Some(bound.min(u64::MAX as u128) as u64) });
            }
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collect::PcRules;
    use std::collections::BTreeMap;

    fn heis(p: u64) -> PcGroup {
        let mut comm = BTreeMap::new();
        comm.insert((1, 0), vec![0, 0, 1]);
        PcGroup::from_rules(PcRules { p, n: 3, power: vec![vec![0; 3]; 3], comm }).unwrap()
    }

    #[test]
    fn extraspecial_degree() {
        for p in [3, 5, 7] {
            let g = heis(p);
            let (mu, cert) = minimal_degree(&g, &Budget::default()).unwrap();
            assert_eq!(mu, (p * p) as u128);
            assert_eq!(cert.parts.len(), 1);
            assert!(is_faithful(&g, &cert.parts).0);
            let rep = coset_action(&g, &cert.parts, &Budget::default()).unwrap();
            assert!(rep.is_homomorphism(&g));
            assert_eq!(rep.degree as u128, mu);
        }
    }

    #[test]
    fn abelian_formula() {
        assert_eq!(mu_abelian(&[25, 5]), 30);
        assert_eq!(mu_abelian(&[7, 7, 7]), 21);
        assert_eq!(mu_abelian(&[]), 1);
        assert_eq!(mu_direct_product(50, 5), 55);
        let g = PcGroup::abelian(5, &[2, 1]).unwrap();
        assert_eq!(minimal_degree(&g, &Budget::default()).unwrap().0, 30);
    }

    #[test]
    fn trivial_and_regular_actions() {
        let g = heis(3);
        let whole = structure::whole(&g);
        let triv = structure::trivial(&g);
        let r = coset_action(&g, std::slice::from_ref(&whole), &Budget::default()).unwrap();
        assert_eq!(r.degree, 1);
        let r = coset_action(&g, std::slice::from_ref(&triv), &Budget::default()).unwrap();
        assert_eq!(r.degree, 27);
        assert!(r.is_homomorphism(&g));
        let z = structure::center(&g);
        let (ok, w) = is_faithful(&g, std::slice::from_ref(&z));
        assert!(!ok);
        assert!(structure::contains(&g, &z, &w.unwrap()));
        assert!(r.to_text().starts_with("degree 27\n"));
    }

    #[test]
    fn budget_reports_bound() {
        let g = PcGroup::abelian(3, &[3, 1]).unwrap();
        match minimal_degree(&g, &Budget::uniform(1)) {
            Err(Error::BudgetExhausted { best_bound: Some(b), .. }) => assert!(b >= 30),
            other => panic!("{other:?}"),
        }
    }
}
