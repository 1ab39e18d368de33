//! Shared fixtures and brute-force oracles for integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use permdeg::pcpres::{self, Refined};
use permdeg::{primes, Element, PcGroup};

/// Non-abelian groups of order p^3.
pub const ORDER_P3: &[(&str, &str)] = &[
    ("heisenberg", "group heis prime p\ngenerators x, y, z\norder p^3\n[x, y] = z\nx^p = y^p = z^p = 1\n"),
    ("metacyclic", "group meta prime p\ngenerators a, b\norder p^3\n[a, b] = a^p\na^{p^2} = b^p = 1\n"),
];

/// Non-abelian groups of order p^4 in the oracle test set.
pub const ORDER_P4: &[(&str, &str)] = &[
    ("cyclic-by-p", "group m4 prime p\ngenerators a, b\norder p^4\n[a, b] = a^{p^2}\na^{p^3} = b^p = 1\n"),
    ("metacyclic-p2p2", "group mm prime p\ngenerators a, b\norder p^4\n[a, b] = a^p\na^{p^2} = b^{p^2} = 1\n"),
    ("central-product", "group cp prime p\ngenerators a, b, c\norder p^4\n[b, c] = a^p\na^{p^2} = b^p = c^p = 1\n"),
    ("heisenberg-x-cp", "group hx prime p\ngenerators x, y, z, w\norder p^4\n[x, y] = z\nx^p = y^p = z^p = w^p = 1\n"),
    ("metacyclic-x-cp", "group mx prime p\ngenerators a, b, w\norder p^4\n[a, b] = a^p\na^{p^2} = b^p = w^p = 1\n"),
    ("class2-big-gen", "group c2 prime p\ngenerators a, b, c\norder p^4\n[a, b] = c\na^{p^2} = b^p = c^p = 1\n"),
    ("maxclass-exp-p", "group mc1 prime p\ngenerators a, b, c, d\norder p^4\n[b, a] = c\n[c, a] = d\na^p = b^p = c^p = d^p = 1\n"),
    ("maxclass-a", "group mc2 prime p\ngenerators a, b, c, d\norder p^4\n[b, a] = c\n[c, a] = d\na^p = d\nb^p = c^p = d^p = 1\n"),
    ("maxclass-b", "group mc3 prime p\ngenerators a, b, c, d\norder p^4\n[b, a] = c\n[c, a] = d\nb^p = d\na^p = c^p = d^p = 1\n"),
];

pub const ABELIAN_P3: &[&[u32]] = &[&[3], &[2, 1], &[1, 1, 1]];
pub const ABELIAN_P4: &[&[u32]] = &[&[4], &[3, 1], &[2, 2], &[2, 1, 1], &[1, 1, 1, 1]];

pub fn build(text: &str, p: u64) -> Refined {
    let prime = primes::resolve_params(p).unwrap();
    pcpres::refine(&pcpres::parse_presentation(text, prime, &[]).unwrap()).unwrap()
}

/// Every group of order p^3 and the p^4 test set, labelled.
pub fn oracle_groups(p: u64) -> Vec<(String, PcGroup)> {
    let mut out = Vec::new();
    for inv in ABELIAN_P3.iter().chain(ABELIAN_P4) {
        out.push((format!("abelian{inv:?}"), PcGroup::abelian(p, inv).unwrap()));
    }
    for (name, text) in ORDER_P3.iter().chain(ORDER_P4) {
        out.push((name.to_string(), build(text, p).group));
    }
    out
}

/// Groups of order at most p^4: the oracle set plus the small abelian ones.
pub fn small_groups(p: u64) -> Vec<(String, PcGroup)> {
    let mut out = vec![
        ("abelian[1]".to_string(), PcGroup::abelian(p, &[1]).unwrap()),
        ("abelian[2]".to_string(), PcGroup::abelian(p, &[2]).unwrap()),
        ("abelian[1, 1]".to_string(), PcGroup::abelian(p, &[1, 1]).unwrap()),
    ];
    out.extend(oracle_groups(p));
    out
}

/// Element-set view of a small group, independent of the pc subgroup code.
/// Elements are indices into lexicographic order; products use tables of
/// right multiplication by each pc generator.
pub struct Naive<'a> {
    pub g: &'a PcGroup,
    pub elems: Vec<Element>,
    words: usize,
    coords: Vec<Vec<u8>>,
    right: Vec<Vec<u32>>,
    inverse: Vec<u32>,
    power: Vec<u32>,
}

pub type Set = Vec<u64>;

impl<'a> Naive<'a> {
    pub fn new(g: &'a PcGroup) -> Self {
        let elems: Vec<Element> = g.elements().collect();
        let words = elems.len().div_ceil(64);
        let p = g.p() as usize;
        let index = |x: &Element| g.coords(x).iter().fold(0, |acc, &e| acc * p + e as usize) as u32;
        let coords = elems.iter().map(|x| g.coords(x)).collect();
        let right = (0..g.n()).map(|j| elems.iter().map(|x| index(&g.mul(x, &g.gen(j)))).collect()).collect();
        let inverse = elems.iter().map(|x| index(&g.inv(x))).collect();
        let power = elems.iter().map(|x| index(&g.pow(x, p as i128))).collect();
        Naive { g, elems, words, coords, right, inverse, power }
    }

    pub fn index(&self, x: &Element) -> usize {
        let p = self.g.p() as usize;
        self.g.coords(x).iter().fold(0, |acc, &e| acc * p + e as usize)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let mut r = a as u32;
        for (j, &e) in self.coords[b].iter().enumerate() {
            for _ in 0..e {
                r = self.right[j][r as usize];
            }
        }
        r as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `x^-1 a x`.
    pub fn conj(&self, a: usize, x: usize) -> usize {
        self.mul(self.mul(self.inv(x), a), x)
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        (0..k).fold(0, |r, _| self.mul(r, a))
    }

    pub fn empty(&self) -> Set {
        vec![0; self.words]
    }

    pub fn has(s: &Set, i: usize) -> bool {
        s[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(s: &mut Set, i: usize) {
        s[i / 64] |= 1 << (i % 64);
    }

    pub fn count(s: &Set) -> u32 {
        s.iter().map(|w| w.count_ones()).sum()
    }

    pub fn members(&self, s: &Set) -> Vec<usize> {
        (0..self.len()).filter(|&i| Self::has(s, i)).collect()
    }

    /// All subgroups, built by adjoining to each subgroup S an element x that
    /// normalises S with x^p in S. Every subgroup of a p-group arises this way.
    pub fn subgroups(&self) -> Vec<Set> {
        let p = self.g.p();
        let mut trivial = self.empty();
        Self::insert(&mut trivial, 0);
        let mut layer: Vec<(Set, Vec<usize>)> = vec![(trivial.clone(), vec![])];
        let mut all = vec![trivial];
        while !layer.is_empty() {
            let mut next: Vec<(Set, Vec<usize>)> = Vec::new();
            let mut found: HashSet<Set> = HashSet::new();
            for (s, gens) in &layer {
                let mem = self.members(s);
                let mut seen = s.clone();
                for x in 0..self.len() {
                    if Self::has(&seen, x) {
                        continue;
                    }
                    // Success or failure is constant on the coset Sx.
                    for &m in &mem {
                        Self::insert(&mut seen, self.mul(m, x));
                    }
                    if !Self::has(s, self.power[x] as usize) || !gens.iter().all(|&m| Self::has(s, self.conj(m, x))) {
                        continue;
                    }
                    let mut t = s.clone();
                    let mut xk = 0;
                    for _ in 1..p {
                        xk = self.mul(xk, x);
                        for &m in &mem {
                            Self::insert(&mut t, self.mul(m, xk));
                        }
                    }
                    for w in 0..self.words {
                        seen[w] |= t[w];
                    }
                    if found.insert(t.clone()) {
                        let mut tg = gens.clone();
                        tg.push(x);
                        next.push((t, tg));
                    }
                }
            }
            all.extend(next.iter().map(|(t, _)| t.clone()));
            layer = next;
        }
        all
    }

    /// Largest subset of `h` closed under conjugation by the pc generators.
    pub fn core(&self, h: &Set) -> Set {
        let gens: Vec<usize> = (0..self.g.n()).map(|j| self.right[j][0] as usize).collect();
        let mut cur = h.clone();
        loop {
            let mut next = cur.clone();
            for i in self.members(&cur) {
                if gens.iter().any(|&y| !Self::has(&cur, self.conj(i, y))) {
                    next[i / 64] &= !(1 << (i % 64));
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Intersection of all conjugates of `h`, by conjugating with every element.
    pub fn full_core(&self, h: &Set) -> Set {
        let mut out = self.empty();
        for i in self.members(h) {
            if (0..self.len()).all(|y| Self::has(h, self.conj(i, y))) {
                Self::insert(&mut out, i);
            }
        }
        out
    }

    pub fn centre(&self) -> Set {
        let gens: Vec<usize> = (0..self.g.n()).map(|j| self.right[j][0] as usize).collect();
        let mut out = self.empty();
        for x in 0..self.len() {
            if gens.iter().all(|&y| self.mul(x, y) == self.mul(y, x)) {
                Self::insert(&mut out, x);
            }
        }
        out
    }

    /// Elements of `s` of order dividing p.
    pub fn omega(&self, s: &Set) -> Vec<usize> {
        self.members(s).into_iter().filter(|&x| self.pow(x, self.g.p()) == 0).collect()
    }

    fn log_p(&self, n: usize) -> usize {
        let mut k = 0;
        let mut m = 1;
        while m < n {
            m *= self.g.p() as usize;
            k += 1;
        }
        k
    }

    /// Minimal faithful degree by exhaustive search over all subgroups and all
    /// sets of at most d(Z) subgroups.
    pub fn minimal_degree(&self) -> u128 {
        if self.len() == 1 {
            return 1;
        }
        let socle = self.omega(&self.centre());
        let d = self.log_p(socle.len());
        let total = self.len() as u128;
        let mut best_by_core: Vec<(u128, Set)> = Vec::new();
        for h in self.subgroups() {
            let idx = total / Self::count(&h) as u128;
            let c = self.core(&h);
            match best_by_core.iter_mut().find(|(_, k)| *k == c) {
                Some(e) => e.0 = e.0.min(idx),
                None => best_by_core.push((idx, c)),
            }
        }
        best_by_core.sort();
        let mut best = u128::MAX;
        let mut start = self.empty();
        for x in 0..self.len() {
            Self::insert(&mut start, x);
        }
        self.search(&best_by_core, &socle, 0, d, 0, &start, &mut best);
        best
    }

    #[allow(clippy::too_many_arguments)]
    fn search(&self, cores: &[(u128, Set)], socle: &[usize], from: usize, left: usize, cost: u128, cur: &Set, best: &mut u128) {
        let meet = socle.iter().filter(|&&i| Self::has(cur, i)).count();
        if meet == 1 {
            *best = (*best).min(cost);
            return;
        }
        // A part of index p^k shrinks the socle meet by at most p^k, at cost p^k >= p*k.
        let dims = self.log_p(meet) as u128;
        if left == 0 || cost + self.g.p() as u128 * dims >= *best {
            return;
        }
        for i in from..cores.len() {
            let (c, k) = &cores[i];
            if cost + c >= *best {
                break;
            }
            let next: Set = cur.iter().zip(k).map(|(a, b)| a & b).collect();
            if next == *cur {
                continue;
            }
            self.search(cores, socle, i + 1, left - 1, cost + c, &next, best);
        }
    }
}

/// Every catalog group with a presentation valid at `p`, over all parameter values.
pub fn catalog_groups(cat: &permdeg::catalog::Catalog, p: u64) -> Vec<(String, Refined)> {
    let mut out = Vec::new();
    for entry in cat.entries.iter().filter(|e| e.source.is_some() && e.valid_for(p)) {
        for binds in cat.sweep(entry, p).unwrap() {
            let b: Vec<(&str, &str)> = binds.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
            let label = if binds.is_empty() {
                entry.id.clone()
            } else {
                format!("{} [{}]", entry.id, binds.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(","))
            };
            out.push((label, cat.load_entry(&entry.id, p, &b).unwrap().0));
        }
    }
    out
}

/// Random element from uniformly random exponents.
pub fn random_element(g: &PcGroup, rng: &mut impl rand::Rng) -> Element {
    let exps: Vec<u8> = (0..g.n()).map(|_| rng.gen_range(0..g.p()) as u8).collect();
    g.element(&exps).unwrap()
}

/// Random abelian invariants (exponents) with total at most `max_log`.
pub fn random_partition(rng: &mut impl rand::Rng, max_log: u32) -> Vec<u32> {
    let total = rng.gen_range(1..=max_log);
    let mut left = total;
    let mut parts = Vec::new();
    while left > 0 {
        let k = rng.gen_range(1..=left);
        parts.push(k);
        left -= k;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}
