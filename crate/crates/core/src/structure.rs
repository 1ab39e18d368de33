//! Subgroup algorithms for groups given by a [`PcGroup`].
//!
//! Every algorithm relies on the series `G_k = <g_k, ..., g_n>` being
//! central, so the k-th exponent is additive on elements of `G_k` modulo
//! `G_{k+1}`.

use crate::collect::{Element, PcGroup};
use crate::error::{Error, Result};
use crate::linalg;
use crate::primes::inv_mod;
use crate::Budget;
use std::collections::{HashMap, HashSet, VecDeque};

/// Subgroup stored by its canonical induced basis: strictly increasing
/// depths, leading exponent 1, zero exponent at the depths of the other
/// basis elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    basis: Vec<Element>,
}

impl Subgroup {
    pub fn basis(&self) -> &[Element] {
        &self.basis
    }
    /// k with |H| = p^k.
    pub fn log_order(&self) -> usize {
        self.basis.len()
    }
    pub fn order(&self, g: &PcGroup) -> u128 {
        (g.p() as u128).pow(self.basis.len() as u32)
    }
    /// |G : H| as a power: returns n - k.
    pub fn log_index(&self, g: &PcGroup) -> usize {
        g.n() - self.basis.len()
    }
    pub fn index(&self, g: &PcGroup) -> u128 {
        (g.p() as u128).pow(self.log_index(g) as u32)
    }
    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }
    pub fn depths(&self, g: &PcGroup) -> Vec<usize> {
        self.basis.iter().map(|b| g.depth(b)).collect()
    }
    pub fn format(&self, g: &PcGroup) -> String {
        let parts: Vec<String> = self.basis.iter().map(|b| g.format(b)).collect();
        format!("<{}>", parts.join(", "))
    }
}

pub fn trivial(_g: &PcGroup) -> Subgroup {
    Subgroup { basis: vec![] }
}

pub fn whole(g: &PcGroup) -> Subgroup {
    Subgroup { basis: g.gens() }
}

fn normalize_lead(g: &PcGroup, x: &Element) -> Element {
    let l = g.lead(x) as u64;
    if l == 1 {
        *x
    } else {
        g.pow(x, inv_mod(l, g.p()) as i128)
    }
}

/// Sift `x` through slots by right multiplication; returns the residue.
fn sift(g: &PcGroup, slots: &[Option<Element>], mut x: Element) -> Element {
    loop {
        let d = g.depth(&x);
        if d == g.n() {
            return x;
        }
        match &slots[d] {
            Some(s) => {
                let c = g.lead(&x) as i128;
                x = g.mul(&x, &g.pow(s, g.p() as i128 - c));
            }
            None => return x,
        }
    }
}

fn canonicalize(g: &PcGroup, slots: Vec<Option<Element>>) -> Subgroup {
    let pivots: Vec<usize> = (0..g.n()).filter(|&d| slots[d].is_some()).collect();
    let mut basis: Vec<Element> = pivots.iter().map(|&d| slots[d].unwrap()).collect();
    for j in 0..basis.len() {
        for i in j + 1..basis.len() {
            let c = basis[j].exps()[pivots[i]] as i128;
            if c != 0 {
                let t = g.pow(&basis[i], g.p() as i128 - c);
                basis[j] = g.mul(&basis[j], &t);
            }
        }
    }
    Subgroup { basis }
}

/// Smallest subgroup containing `gens`.
pub fn closure(g: &PcGroup, gens: &[Element]) -> Subgroup {
    closure_onto(g, vec![None; g.n()], gens)
}

fn closure_onto(g: &PcGroup, mut slots: Vec<Option<Element>>, gens: &[Element]) -> Subgroup {
    let mut queue: VecDeque<Element> = gens.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        let x = sift(g, &slots, x);
        let d = g.depth(&x);
        if d == g.n() {
            continue;
        }
        let x = normalize_lead(g, &x);
        queue.push_back(g.pow(&x, g.p() as i128));
        for s in slots.iter().flatten() {
            queue.push_back(g.comm(&x, s));
        }
        slots[d] = Some(x);
    }
    canonicalize(g, slots)
}

fn slots_of(g: &PcGroup, h: &Subgroup) -> Vec<Option<Element>> {
    let mut slots = vec![None; g.n()];
    for b in &h.basis {
        slots[g.depth(b)] = Some(*b);
    }
    slots
}

/// Subgroup generated by `h` and `extra`.
pub fn extend(g: &PcGroup, h: &Subgroup, extra: &[Element]) -> Subgroup {
    closure_onto(g, slots_of(g, h), extra)
}

pub fn join(g: &PcGroup, a: &Subgroup, b: &Subgroup) -> Subgroup {
    extend(g, a, &b.basis)
}

pub fn contains(g: &PcGroup, h: &Subgroup, x: &Element) -> bool {
    let slots = slots_of(g, h);
    g.is_identity(&sift(g, &slots, *x))
}

/// Whether `k` is a subgroup of `h`.
pub fn is_subgroup(g: &PcGroup, h: &Subgroup, k: &Subgroup) -> bool {
    let slots = slots_of(g, h);
    k.basis.iter().all(|x| g.is_identity(&sift(g, &slots, *x)))
}

pub fn conjugate(g: &PcGroup, h: &Subgroup, x: &Element) -> Subgroup {
    let gens: Vec<Element> = h.basis.iter().map(|b| g.conj(b, x)).collect();
    closure(g, &gens)
}

/// Whether `h` is normalized by every element of `by`.
pub fn is_normalized_by(g: &PcGroup, h: &Subgroup, by: &Subgroup) -> bool {
    let slots = slots_of(g, h);
    by.basis.iter().all(|x| h.basis.iter().all(|b| g.is_identity(&sift(g, &slots, g.conj(b, x)))))
}

pub fn is_normal(g: &PcGroup, h: &Subgroup) -> bool {
    is_normalized_by(g, h, &whole(g))
}

/// Canonical representative of the right coset `h x`.
pub fn coset_rep(g: &PcGroup, h: &Subgroup, x: &Element) -> Element {
    let mut y = *x;
    for b in &h.basis {
        let d = g.depth(b);
        let c = y.exps()[d] as i128;
        if c != 0 {
            y = g.mul(&g.pow(b, g.p() as i128 - c), &y);
        }
    }
    y
}

/// All canonical right coset representatives of `h` in `g`.
pub fn coset_reps(g: &PcGroup, h: &Subgroup) -> Vec<Element> {
    let piv: HashSet<usize> = h.depths(g).into_iter().collect();
    let free: Vec<usize> = (0..g.n()).filter(|d| !piv.contains(d)).collect();
    let p = g.p() as usize;
    let total = p.pow(free.len() as u32);
    let mut out = Vec::with_capacity(total);
    let mut e = vec![0u8; g.n()];
    for mut idx in 0..total {
        for &d in free.iter().rev() {
            e[d] = (idx % p) as u8;
            idx /= p;
        }
        out.push(g.element(&e).expect("valid exponents"));
    }
    out
}

/// Position of a canonical coset representative in [`coset_reps`] order.
pub fn coset_index(g: &PcGroup, h: &Subgroup, rep: &Element) -> usize {
    let piv: HashSet<usize> = h.depths(g).into_iter().collect();
    let p = g.p() as usize;
    (0..g.n()).filter(|d| !piv.contains(d)).fold(0, |acc, d| acc * p + rep.exps()[d] as usize)
}

/// Kernel of a map that is a homomorphism to Z/p on the current subgroup.
fn kernel_step(g: &PcGroup, s: &Subgroup, f: impl Fn(&Element) -> u64) -> Subgroup {
    let p = g.p();
    let vals: Vec<u64> = s.basis.iter().map(|b| f(b) % p).collect();
    let Some(a) = (0..vals.len()).rev().find(|&i| vals[i] != 0) else { return s.clone() };
    let inv = inv_mod(vals[a], p);
    let mut gens = Vec::with_capacity(s.basis.len());
    for (b, x) in s.basis.iter().enumerate() {
        if b < a && vals[b] != 0 {
            let k = (p - vals[b] * inv % p) % p;
            gens.push(g.mul(x, &g.pow(&s.basis[a], k as i128)));
        } else if b != a {
            gens.push(*x);
        }
    }
    let mut sub = closure(g, &gens);
    if sub.log_order() >= s.log_order() {
        sub = s.clone();
    }
    sub
}

/// Elements x of `s` with `f(x) = 1`, where `f` restricted to
/// `{x : f(x) in G_j}` is a homomorphism modulo `G_{j+1}` for every j.
pub fn layered_kernel(g: &PcGroup, s: &Subgroup, f: impl Fn(&Element) -> Element) -> Subgroup {
    let mut cur = s.clone();
    for j in 0..g.n() {
        cur = kernel_step(g, &cur, |x| {
            let y = f(x);
            debug_assert!(g.depth(&y) >= j);
            y.exps()[j] as u64
        });
    }
    cur
}

pub fn intersection(g: &PcGroup, u: &Subgroup, v: &Subgroup) -> Subgroup {
    let vdepths = v.depths(g);
    let mut cur = u.clone();
    for j in 0..g.n() {
        if vdepths.contains(&j) || cur.is_trivial() {
            continue;
        }
        cur = kernel_step(g, &cur, |x| {
            let mut y = *x;
            for (b, &d) in v.basis.iter().zip(&vdepths) {
                if d >= j {
                    break;
                }
                let c = y.exps()[d] as i128;
                if c != 0 {
                    y = g.mul(&g.pow(b, g.p() as i128 - c), &y);
                }
            }
            y.exps()[j] as u64
        });
    }
    cur
}

pub fn centralizer_in(g: &PcGroup, s: &Subgroup, x: &Element) -> Subgroup {
    layered_kernel(g, s, |y| g.comm(x, y))
}

pub fn center(g: &PcGroup) -> Subgroup {
    center_of(g, &whole(g))
}

/// Center of a subgroup.
pub fn center_of(g: &PcGroup, h: &Subgroup) -> Subgroup {
    let mut c = h.clone();
    for x in &h.basis {
        c = centralizer_in(g, &c, x);
    }
    c
}

/// Normal closure of `gens` under conjugation by `by`.
pub fn normal_closure_in(g: &PcGroup, by: &Subgroup, gens: &[Element]) -> Subgroup {
    let mut n = closure(g, gens);
    loop {
        let slots = slots_of(g, &n);
        let extra: Vec<Element> = by
            .basis
            .iter()
            .flat_map(|x| n.basis.iter().map(move |b| (b, x)))
            .map(|(b, x)| g.conj(b, x))
            .filter(|y| !g.is_identity(&sift(g, &slots, *y)))
            .collect();
        if extra.is_empty() {
            return n;
        }
        n = extend(g, &n, &extra);
    }
}

/// Commutator subgroup [A, B] for subgroups normalizing each other inside `ambient`.
pub fn commutator_subgroup(g: &PcGroup, ambient: &Subgroup, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let gens: Vec<Element> = a.basis.iter().flat_map(|x| b.basis.iter().map(move |y| (x, y))).map(|(x, y)| g.comm(x, y)).collect();
    normal_closure_in(g, ambient, &gens)
}

pub fn derived(g: &PcGroup) -> Subgroup {
    derived_of(g, &whole(g))
}

pub fn derived_of(g: &PcGroup, h: &Subgroup) -> Subgroup {
    commutator_subgroup(g, h, h, h)
}

/// Frattini subgroup H' H^p.
pub fn frattini(g: &PcGroup, h: &Subgroup) -> Subgroup {
    let d = derived_of(g, h);
    let pw: Vec<Element> = h.basis.iter().map(|b| g.pow(b, g.p() as i128)).collect();
    extend(g, &d, &pw)
}

/// Minimal number of generators.
pub fn rank_d(g: &PcGroup, h: &Subgroup) -> usize {
    h.log_order() - frattini(g, h).log_order()
}

pub fn is_abelian(g: &PcGroup, h: &Subgroup) -> bool {
    h.basis.iter().enumerate().all(|(i, x)| h.basis[i + 1..].iter().all(|y| g.is_identity(&g.comm(x, y))))
}

pub fn lower_central_series(g: &PcGroup) -> Vec<Subgroup> {
    let gg = whole(g);
    let mut out = vec![gg.clone()];
    loop {
        let last = out.last().unwrap();
        if last.is_trivial() {
            return out;
        }
        let next = commutator_subgroup(g, &gg, last, &gg);
        if next == *last {
            return out;
        }
        out.push(next);
    }
}

pub fn nilpotency_class(g: &PcGroup) -> usize {
    lower_central_series(g).len() - 1
}

/// Exponent of a subgroup as a power of p (returns e with exp = p^e).
pub fn exponent_log(g: &PcGroup, h: &Subgroup, budget: &Budget) -> Result<u32> {
    let log = |x: &Element| (g.order_of(x) as f64).log(g.p() as f64).round() as u32;
    if h.is_trivial() {
        return Ok(0);
    }
    let gens_max = h.basis.iter().map(log).max().unwrap_or(0);
    if nilpotency_class_of(g, h) < g.p() as usize {
        return Ok(gens_max);
    }
    let total = h.order(g);
    if total > budget.max_elements as u128 {
        return Err(Error::BudgetExhausted { count: budget.max_elements, best_bound: None });
    }
    let mut best = gens_max;
    for x in elements_of(g, h) {
        best = best.max(log(&x));
    }
    Ok(best)
}

pub fn exponent(g: &PcGroup, budget: &Budget) -> Result<u128> {
    Ok((g.p() as u128).pow(exponent_log(g, &whole(g), budget)?))
}

fn nilpotency_class_of(g: &PcGroup, h: &Subgroup) -> usize {
    let mut cur = h.clone();
    let mut c = 0;
    while !cur.is_trivial() {
        let next = commutator_subgroup(g, h, &cur, h);
        c += 1;
        if next == cur {
            return usize::MAX;
        }
        cur = next;
    }
    c
}

/// All elements of a subgroup as products of basis powers.
pub fn elements_of<'a>(g: &'a PcGroup, h: &'a Subgroup) -> impl Iterator<Item = Element> + 'a {
    let p = g.p() as u128;
    let k = h.log_order();
    let total = p.pow(k as u32);
    (0..total).map(move |mut idx| {
        let mut x = g.identity();
        let mut digits = vec![0u8; k];
        for d in digits.iter_mut().rev() {
            *d = (idx % p) as u8;
            idx /= p;
        }
        for (b, &e) in h.basis.iter().zip(&digits) {
            if e != 0 {
                x = g.mul(&x, &g.pow(b, e as i128));
            }
        }
        x
    })
}

/// Abelian invariants as exponents (descending): a value e stands for C_{p^e}.
pub fn abelian_invariant_exps(g: &PcGroup, h: &Subgroup) -> Result<Vec<u32>> {
    if !is_abelian(g, h) {
        return Err(Error::NotAbelian(format!("subgroup {} is not abelian", h.format(g))));
    }
    let mut sizes = vec![h.log_order()];
    let mut cur = h.clone();
    while !cur.is_trivial() {
        let pw: Vec<Element> = cur.basis.iter().map(|b| g.pow(b, g.p() as i128)).collect();
        cur = closure(g, &pw);
        sizes.push(cur.log_order());
    }
    sizes.push(0);
    let mut out = Vec::new();
    for k in 1..sizes.len() - 1 {
        let at_least_k = sizes[k - 1] - sizes[k];
        let at_least_k1 = sizes[k] - sizes[k + 1];
        for _ in 0..at_least_k - at_least_k1 {
            out.push(k as u32);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Abelian invariants as orders p^e, descending.
pub fn abelian_invariants(g: &PcGroup, h: &Subgroup) -> Result<Vec<u128>> {
    Ok(abelian_invariant_exps(g, h)?.into_iter().map(|e| (g.p() as u128).pow(e)).collect())
}

/// Elements of order dividing p in an abelian subgroup.
pub fn omega1(g: &PcGroup, a: &Subgroup) -> Subgroup {
    layered_kernel(g, a, |x| g.pow(x, g.p() as i128))
}

/// Omega_1(Z(G)).
pub fn socle_of_center(g: &PcGroup) -> Subgroup {
    omega1(g, &center(g))
}

/// Largest normal subgroup of `g` inside `h`.
pub fn core(g: &PcGroup, h: &Subgroup) -> Subgroup {
    let mut c = h.clone();
    loop {
        let mut changed = false;
        for x in g.gens() {
            if c.is_trivial() {
                return c;
            }
            let cx = conjugate(g, &c, &x);
            if cx != c {
                c = intersection(g, &c, &cx);
                changed = true;
            }
        }
        if !changed {
            return c;
        }
    }
}

/// Stabilizer in `m` of `point` under a right action, by the p-group orbit
/// algorithm along the induced basis of `m`.
pub fn stabilizer<P, F>(g: &PcGroup, m: &Subgroup, point: P, act: F, budget: &Budget) -> Result<Subgroup>
where
    P: Clone + Eq + std::hash::Hash,
    F: Fn(&P, &Element) -> P,
{
    let mut orbit: Vec<P> = vec![point.clone()];
    let mut trans: HashMap<P, Element> = HashMap::new();
    trans.insert(point.clone(), g.identity());
    let mut stab = Vec::new();
    for mi in m.basis.iter().rev() {
        let img = act(&point, mi);
        if let Some(u) = trans.get(&img) {
            stab.push(g.mul(mi, &g.inv(u)));
            continue;
        }
        let size = orbit.len();
        if (size as u64).saturating_mul(g.p()) > budget.max_elements {
            return Err(Error::BudgetExhausted { count: size as u64, best_bound: None });
        }
        let mut layer: Vec<(P, Element)> = orbit.iter().map(|q| (q.clone(), trans[q])).collect();
        for _ in 1..g.p() {
            layer = layer.into_iter().map(|(q, t)| (act(&q, mi), g.mul(&t, mi))).collect();
            for (q, t) in &layer {
                trans.insert(q.clone(), *t);
                orbit.push(q.clone());
            }
        }
    }
    Ok(closure(g, &stab))
}

pub fn normalizer(g: &PcGroup, h: &Subgroup, budget: &Budget) -> Result<Subgroup> {
    normalizer_in(g, &whole(g), h, budget)
}

pub fn normalizer_in(g: &PcGroup, m: &Subgroup, h: &Subgroup, budget: &Budget) -> Result<Subgroup> {
    stabilizer(g, m, h.clone(), |s, x| conjugate(g, s, x), budget)
}

/// Whether `a/k` is cyclic, for `k` normal in `a`.
pub fn is_cyclic_quotient(g: &PcGroup, a: &Subgroup, k: &Subgroup) -> bool {
    join(g, k, &frattini(g, a)).log_order() + 1 >= a.log_order()
}

/// Right transversal of a normal subgroup `m` in `n`, identity first.
pub fn transversal(g: &PcGroup, n: &Subgroup, m: &Subgroup) -> Vec<Element> {
    let mut slots = slots_of(g, m);
    let mut rel = Vec::new();
    for b in &n.basis {
        let x = sift(g, &slots, *b);
        if !g.is_identity(&x) {
            let x = normalize_lead(g, &x);
            slots[g.depth(&x)] = Some(x);
            rel.push(x);
        }
    }
    let mut out = vec![g.identity()];
    for x in rel.iter().rev() {
        let mut next = Vec::with_capacity(out.len() * g.p() as usize);
        let mut pw = g.identity();
        for _ in 0..g.p() {
            next.extend(out.iter().map(|t| g.mul(&pw, t)));
            pw = g.mul(&pw, x);
        }
        out = next;
    }
    out
}

/// Relative basis of `m` modulo a normal subgroup `n` with `m/n` elementary abelian.
pub struct QuotientCoords {
    slots: Vec<Option<(Element, Option<usize>)>>,
    /// Elements of `m` whose images form a basis of `m/n`.
    pub gens: Vec<Element>,
    p: u64,
}

impl QuotientCoords {
    pub fn new(g: &PcGroup, m: &Subgroup, n: &Subgroup) -> Self {
        let mut slots: Vec<Option<(Element, Option<usize>)>> = vec![None; g.n()];
        for b in &n.basis {
            slots[g.depth(b)] = Some((*b, None));
        }
        let mut gens = Vec::new();
        for b in &m.basis {
            let plain: Vec<Option<Element>> = slots.iter().map(|s| s.map(|(e, _)| e)).collect();
            let x = sift(g, &plain, *b);
            if !g.is_identity(&x) {
                let x = normalize_lead(g, &x);
                slots[g.depth(&x)] = Some((x, Some(gens.len())));
                gens.push(x);
            }
        }
        QuotientCoords { slots, gens, p: g.p() }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Coordinates of `x` (an element of `m`) in `m/n`.
    pub fn coords(&self, g: &PcGroup, x: &Element) -> Vec<u64> {
        let mut v = vec![0u64; self.gens.len()];
        let mut y = *x;
        loop {
            let d = g.depth(&y);
            if d == g.n() {
                return v;
            }
            let Some((s, tag)) = self.slots[d] else {
                panic!("element outside the ambient subgroup");
            };
            let c = g.lead(&y) as u64;
            if let Some(k) = tag {
                v[k] = (v[k] + c) % self.p;
            }
            y = g.mul(&y, &g.pow(&s, (self.p - c) as i128));
        }
    }

    /// Element with the given coordinates.
    pub fn element(&self, g: &PcGroup, v: &[u64]) -> Element {
        let mut x = g.identity();
        for (b, &c) in self.gens.iter().zip(v) {
            if c != 0 {
                x = g.mul(&x, &g.pow(b, c as i128));
            }
        }
        x
    }
}

/// Subgroup of `m` containing `n` that is the kernel of the functional `f`
/// on the quotient coordinates.
pub fn functional_kernel(g: &PcGroup, n: &Subgroup, q: &QuotientCoords, f: &[u64]) -> Subgroup {
    let ker = linalg::nullspace(&[f.to_vec()], q.rank(), g.p());
    let gens: Vec<Element> = ker.iter().map(|v| q.element(g, v)).collect();
    extend(g, n, &gens)
}

/// Maximal subgroups of `l` that contain `must` (a subgroup of `l`).
pub fn maximal_subgroups_containing(g: &PcGroup, l: &Subgroup, must: &Subgroup) -> Vec<Subgroup> {
    let phi = frattini(g, l);
    let q = QuotientCoords::new(g, l, &phi);
    let rows: Vec<Vec<u64>> = must.basis.iter().map(|x| q.coords(g, x)).collect();
    let ann = linalg::nullspace(&rows, q.rank(), g.p());
    linalg::projective_points(&ann, g.p()).iter().map(|f| functional_kernel(g, &phi, &q, f)).collect()
}

pub fn maximal_subgroups(g: &PcGroup, l: &Subgroup) -> Vec<Subgroup> {
    maximal_subgroups_containing(g, l, &trivial(g))
}

/// Canonical member (least basis) of the conjugacy class of `h`.
pub fn conjugacy_canonical(g: &PcGroup, h: &Subgroup, budget: &Budget) -> Result<(Subgroup, usize)> {
    let mut seen: HashSet<Subgroup> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(h.clone());
    queue.push_back(h.clone());
    while let Some(s) = queue.pop_front() {
        for x in g.gens() {
            let t = conjugate(g, &s, &x);
            if seen.insert(t.clone()) {
                if seen.len() as u64 > budget.max_elements {
                    return Err(Error::BudgetExhausted { count: seen.len() as u64, best_bound: None });
                }
                queue.push_back(t);
            }
        }
    }
    let n = seen.len();
    Ok((seen.into_iter().min().expect("nonempty"), n))
}

/// One representative per conjugacy class of subgroups of order at least
/// `p^min_log_order`, descending by order, ties by basis.
pub fn subgroups_up_to_conjugacy(g: &PcGroup, min_log_order: usize, budget: &Budget) -> Result<Vec<Subgroup>> {
    let mut out = Vec::new();
    let mut level: Vec<Subgroup> = vec![whole(g)];
    let mut visited: u64 = 0;
    loop {
        level.sort();
        out.extend(level.iter().cloned());
        let Some(first) = level.first() else { break };
        if first.log_order() <= min_log_order || first.is_trivial() {
            break;
        }
        let mut next: HashSet<Subgroup> = HashSet::new();
        for l in &level {
            for m in maximal_subgroups(g, l) {
                visited += 1;
                if visited > budget.max_subgroups {
                    return Err(Error::BudgetExhausted { count: visited, best_bound: None });
                }
                let (c, _) = conjugacy_canonical(g, &m, budget)?;
                next.insert(c);
            }
        }
        level = next.into_iter().collect();
    }
    Ok(out)
}
