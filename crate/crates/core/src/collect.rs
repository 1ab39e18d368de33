//! Collection from the left for polycyclic presentations with relative
//! orders p, plus the runtime group object [`PcGroup`].
//!
//! Rules must be in central-series form: `g_i^p` lies in `G_{i+1}` and
//! `[g_j, g_i]` (j > i) lies in `G_{j+1}`, where `G_k = <g_k, ..., g_n>`.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::OnceLock;

pub const MAX_GENS: usize = 16;

/// Central elementary abelian payload carried alongside a normal word.
pub trait Tail: Clone + Default + PartialEq + Eq + Hash + fmt::Debug + Send + Sync {
    fn add_assign(&mut self, other: &Self, p: u8);
    fn neg(&self, p: u8) -> Self;
    fn is_zero(&self) -> bool;
}

impl Tail for () {
    fn add_assign(&mut self, _: &Self, _: u8) {}
    fn neg(&self, _: u8) -> Self {}
    fn is_zero(&self) -> bool {
        true
    }
}

/// Vector over GF(p) of tail coordinates.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct TailVec(pub Vec<u8>);

impl Tail for TailVec {
    fn add_assign(&mut self, other: &Self, p: u8) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a = ((*a as u16 + *b as u16) % p as u16) as u8;
        }
    }
    fn neg(&self, p: u8) -> Self {
        TailVec(self.0.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect())
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// Normal word g_1^{e_1} ... g_n^{e_n} with a central payload.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word<T> {
    pub e: [u8; MAX_GENS],
    pub t: T,
}

impl<T: Tail> Word<T> {
    pub fn one() -> Self {
        Word { e: [0; MAX_GENS], t: T::default() }
    }
    pub fn gen(i: usize, k: u8) -> Self {
        let mut w = Self::one();
        w.e[i] = k;
        w
    }
    pub fn from_exps(exps: &[u8]) -> Self {
        let mut w = Self::one();
        w.e[..exps.len()].copy_from_slice(exps);
        w
    }
    fn depth(&self, n: usize) -> usize {
        (0..n).find(|&k| self.e[k] != 0).unwrap_or(n)
    }
}

/// Collector over pc rules with payload type `T`.
pub struct Collector<T: Tail> {
    n: usize,
    p: u8,
    power: Vec<Word<T>>,
    comm: Vec<Word<T>>,
    table: Vec<OnceLock<Vec<OnceLock<Word<T>>>>>,
}

impl<T: Tail> Collector<T> {
    /// Build a collector. `comm` maps (j, i) with j > i to `[g_j, g_i]`;
    /// missing pairs commute. Central-series form is checked.
    pub fn new(p: u8, n: usize, power: Vec<Word<T>>, comm: &BTreeMap<(usize, usize), Word<T>>) -> Result<Self> {
        if n > MAX_GENS {
            return Err(Error::InvalidPc(format!("{n} generators exceeds the maximum {MAX_GENS}")));
        }
        if power.len() != n {
            return Err(Error::InvalidPc("power rule count differs from generator count".into()));
        }
        for (i, w) in power.iter().enumerate() {
            if w.depth(n) <= i || w.e[..n].iter().any(|&x| x >= p) || w.e[n..].iter().any(|&x| x != 0) {
                return Err(Error::InvalidPc(format!("power rule g{}^p outside G_{}", i + 1, i + 2)));
            }
        }
        let mut cv = vec![Word::one(); n * n];
        for (&(j, i), w) in comm {
            if !(j > i && j < n) {
                return Err(Error::InvalidPc(format!("commutator key ({}, {}) must have j > i", j + 1, i + 1)));
            }
            if w.depth(n) <= j || w.e[..n].iter().any(|&x| x >= p) || w.e[n..].iter().any(|&x| x != 0) {
                return Err(Error::InvalidPc(format!("rule [g{}, g{}] outside G_{}", j + 1, i + 1, j + 2)));
            }
            cv[j * n + i] = w.clone();
        }
        let table = (0..n * n).map(|_| OnceLock::new()).collect();
        Ok(Collector { n, p, power, comm: cv, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> u8 {
        self.p
    }
    pub fn power_rule(&self, i: usize) -> &Word<T> {
        &self.power[i]
    }
    pub fn comm_rule(&self, j: usize, i: usize) -> &Word<T> {
        &self.comm[j * self.n + i]
    }

    /// (g_k^a)^(g_i^e) for k > i, 1 <= e, a < p.
    fn conj_table(&self, i: usize, k: usize, e: u8, a: u8) -> &Word<T> {
        let pm = (self.p - 1) as usize;
        let cells = self.table[i * self.n + k].get_or_init(|| (0..pm * pm).map(|_| OnceLock::new()).collect());
        let idx = (e as usize - 1) * pm + (a as usize - 1);
        if let Some(w) = cells[idx].get() {
            return w;
        }
        let w = if a > 1 {
            let prev = self.conj_table(i, k, e, a - 1).clone();
            self.mul(&prev, self.conj_table(i, k, e, 1))
        } else if e > 1 {
            let prev = self.conj_table(i, k, e - 1, 1).clone();
            self.conj(&prev, i, 1)
        } else {
            let mut w = self.comm_rule(k, i).clone();
            w.e[k] = 1;
            w
        };
        let _ = cells[idx].set(w);
        cells[idx].get().expect("initialized")
    }

    /// x^(g_i^e) for x in G_{i+1}.
    fn conj(&self, x: &Word<T>, i: usize, e: u8) -> Word<T> {
        let mut r = Word { e: [0; MAX_GENS], t: x.t.clone() };
        for k in i + 1..self.n {
            if x.e[k] != 0 {
                let c = self.conj_table(i, k, e, x.e[k]);
                r = self.mul(&r, c);
            }
        }
        r
    }

    /// r := r * g_i^e with 0 < e < p.
    pub fn mul_gen_pow(&self, r: &mut Word<T>, i: usize, e: u8) {
        if e == 0 {
            return;
        }
        let s = r.e[i] as u16 + e as u16;
        let tail_zero = r.e[i + 1..self.n].iter().all(|&x| x == 0);
        if tail_zero && s < self.p as u16 {
            r.e[i] = s as u8;
            return;
        }
        let mut x = Word::one();
        x.e[i + 1..self.n].copy_from_slice(&r.e[i + 1..self.n]);
        let mut y = if tail_zero { Word::one() } else { self.conj(&x, i, e) };
        if s >= self.p as u16 {
            y = self.mul(&self.power[i], &y);
        }
        r.e[i] = (s % self.p as u16) as u8;
        r.e[i + 1..self.n].copy_from_slice(&y.e[i + 1..self.n]);
        r.t.add_assign(&y.t, self.p);
    }

    pub fn mul(&self, a: &Word<T>, b: &Word<T>) -> Word<T> {
        let mut r = a.clone();
        for k in 0..self.n {
            if b.e[k] != 0 {
                self.mul_gen_pow(&mut r, k, b.e[k]);
            }
        }
        r.t.add_assign(&b.t, self.p);
        r
    }

    pub fn inv(&self, a: &Word<T>) -> Word<T> {
        let mut cur = a.clone();
        let mut y = Word::one();
        for k in 0..self.n {
            if cur.e[k] != 0 {
                let c = self.p - cur.e[k];
                self.mul_gen_pow(&mut cur, k, c);
                self.mul_gen_pow(&mut y, k, c);
            }
        }
        y.t = cur.t.neg(self.p);
        y
    }

    pub fn pow(&self, a: &Word<T>, k: i128) -> Word<T> {
        let base = if k < 0 { self.inv(a) } else { a.clone() };
        let mut k = k.unsigned_abs();
        let mut b = base;
        let mut r = Word::one();
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(&r, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    /// a^-1 b^-1 a b
    pub fn comm(&self, a: &Word<T>, b: &Word<T>) -> Word<T> {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }

    /// Left and right sides of every standard overlap test.
    pub fn overlaps(&self) -> Vec<(Vec<usize>, Word<T>, Word<T>)> {
        let n = self.n;
        let g = |i: usize| Word::<T>::gen(i, 1);
        let gp = |i: usize| Word::<T>::gen(i, self.p - 1);
        let mut out = Vec::new();
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let l = self.mul(&self.mul(&g(k), &g(j)), &g(i));
                    let r = self.mul(&g(k), &self.mul(&g(j), &g(i)));
                    out.push((vec![k, j, i], l, r));
                }
            }
        }
        for j in 0..n {
            for i in 0..j {
                let l = self.mul(&self.power[j], &g(i));
                let r = self.mul(&gp(j), &self.mul(&g(j), &g(i)));
                out.push((vec![j, j, i], l, r));
                let l = self.mul(&g(j), &self.power[i]);
                let r = self.mul(&self.mul(&g(j), &g(i)), &gp(i));
                out.push((vec![j, i, i], l, r));
            }
        }
        for i in 0..n {
            let l = self.mul(&self.power[i], &g(i));
            let r = self.mul(&g(i), &self.power[i]);
            out.push((vec![i, i, i], l, r));
        }
        out
    }
}

/// A failed consistency condition.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    /// Generator indices (1-based) of the failing test.
    pub indices: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.indices, self.detail)
    }
}

/// Raw pc rules: relative orders p, `power[i]` = exponent vector of g_i^p,
/// `comm[(j, i)]` = exponent vector of [g_j, g_i] for j > i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcRules {
    pub p: u64,
    pub n: usize,
    pub power: Vec<Vec<u8>>,
    pub comm: BTreeMap<(usize, usize), Vec<u8>>,
}

fn fmt_exps(e: &[u8]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| if x == 1 { format!("g{}", i + 1) } else { format!("g{}^{}", i + 1, x) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Check raw rules: structural violations (right sides outside the
/// required subgroup) are reported without collecting; otherwise every
/// failing overlap test is returned.
pub fn consistency_check(rules: &PcRules) -> Vec<Violation> {
    let n = rules.n;
    let mut out = Vec::new();
    let lead = |w: &[u8]| w.iter().position(|&x| x != 0).unwrap_or(n);
    for (i, w) in rules.power.iter().enumerate() {
        if lead(w) <= i {
            out.push(Violation { indices: vec![i + 1], detail: format!("g{}^p = {} is not in G_{}", i + 1, fmt_exps(w), i + 2) });
        }
    }
    for (&(j, i), w) in &rules.comm {
        if j <= i || lead(w) <= j {
            out.push(Violation {
                indices: vec![j + 1, i + 1],
                detail: format!("[g{}, g{}] = {} is not in G_{}", j + 1, i + 1, fmt_exps(w), j + 2),
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    let Ok(p) = u8::try_from(rules.p) else {
        return vec![Violation { indices: vec![], detail: "prime too large".into() }];
    };
    let power = rules.power.iter().map(|w| Word::<()>::from_exps(w)).collect();
    let comm = rules.comm.iter().map(|(&k, w)| (k, Word::<()>::from_exps(w))).collect();
    let col = match Collector::new(p, n, power, &comm) {
        Ok(c) => c,
        Err(e) => return vec![Violation { indices: vec![], detail: e.to_string() }],
    };
    col.overlaps()
        .into_iter()
        .filter(|(_, l, r)| l != r)
        .map(|(idx, l, r)| Violation {
            indices: idx.iter().map(|x| x + 1).collect(),
            detail: format!("{} != {}", fmt_exps(&l.e[..n]), fmt_exps(&r.e[..n])),
        })
        .collect()
}

static NEXT_GID: AtomicU32 = AtomicU32::new(1);

/// Element of a [`PcGroup`] in normal form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Element {
    gid: u32,
    exps: [u8; MAX_GENS],
}

impl Element {
    pub fn exps(&self) -> &[u8; MAX_GENS] {
        &self.exps
    }
    pub fn group_id(&self) -> u32 {
        self.gid
    }
}

/// A consistent polycyclic presentation with relative orders p.
pub struct PcGroup {
    gid: u32,
    p: u64,
    n: usize,
    col: Collector<()>,
    rules: PcRules,
}

impl fmt::Debug for PcGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PcGroup(p={}, n={})", self.p, self.n)
    }
}

impl PcGroup {
    /// Build a group from rules, rejecting inconsistent presentations.
    pub fn from_rules(rules: PcRules) -> Result<PcGroup> {
        let v = consistency_check(&rules);
        if !v.is_empty() {
            return Err(Error::InvalidPc(format!("inconsistent: {}", v[0])));
        }
        Self::from_rules_unchecked(rules)
    }

    pub(crate) fn from_rules_unchecked(rules: PcRules) -> Result<PcGroup> {
        let p = u8::try_from(rules.p).map_err(|_| Error::InvalidPc("prime too large".into()))?;
        let power = rules.power.iter().map(|w| Word::<()>::from_exps(w)).collect();
        let comm = rules.comm.iter().map(|(&k, w)| (k, Word::<()>::from_exps(w))).collect();
        let col = Collector::new(p, rules.n, power, &comm)?;
        Ok(PcGroup { gid: NEXT_GID.fetch_add(1, Ordering::Relaxed), p: rules.p, n: rules.n, col, rules })
    }

    /// Elementary abelian or cyclic helper: C_p^n with given power rules only.
    pub fn abelian(p: u64, invariants: &[u32]) -> Result<PcGroup> {
        let n: usize = invariants.iter().map(|&k| k as usize).sum();
        let mut power = vec![vec![0u8; n]; n];
        let mut pos = 0;
        for &k in invariants {
            for j in 0..k as usize {
                if j + 1 < k as usize {
                    power[pos + j][pos + j + 1] = 1;
                }
            }
            pos += k as usize;
        }
        PcGroup::from_rules(PcRules { p, n, power, comm: BTreeMap::new() })
    }

    /// Direct product with the generators of `self` first.
    pub fn direct_product(&self, other: &PcGroup) -> Result<PcGroup> {
        if self.p != other.p {
            return Err(Error::GroupMismatch);
        }
        let (n1, n2) = (self.n, other.n);
        let n = n1 + n2;
        let shift = |w: &[u8], off: usize| {
            let mut v = vec![0u8; n];
            v[off..off + w.len()].copy_from_slice(w);
            v
        };
        let mut power: Vec<Vec<u8>> = self.rules.power.iter().map(|w| shift(w, 0)).collect();
        power.extend(other.rules.power.iter().map(|w| shift(w, n1)));
        let mut comm = BTreeMap::new();
        for (&(j, i), w) in &self.rules.comm {
            comm.insert((j, i), shift(w, 0));
        }
        for (&(j, i), w) in &other.rules.comm {
            comm.insert((j + n1, i + n1), shift(w, n1));
        }
        PcGroup::from_rules_unchecked(PcRules { p: self.p, n, power, comm })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn id(&self) -> u32 {
        self.gid
    }
    pub fn rules(&self) -> &PcRules {
        &self.rules
    }
    /// Group order as a power of p: returns n with |G| = p^n.
    pub fn log_order(&self) -> usize {
        self.n
    }
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.n as u32)
    }

    /// Empty list for every constructed group; kept for symmetry with raw rules.
    pub fn consistency_check(&self) -> Vec<Violation> {
        consistency_check(&self.rules)
    }

    fn wrap(&self, w: Word<()>) -> Element {
        Element { gid: self.gid, exps: w.e }
    }
    fn word(&self, x: &Element) -> Word<()> {
        debug_assert_eq!(x.gid, self.gid);
        Word { e: x.exps, t: () }
    }

    pub fn identity(&self) -> Element {
        Element { gid: self.gid, exps: [0; MAX_GENS] }
    }
    /// Generator g_{i+1} (0-based index).
    pub fn gen(&self, i: usize) -> Element {
        self.wrap(Word::gen(i, 1))
    }
    pub fn gens(&self) -> Vec<Element> {
        (0..self.n).map(|i| self.gen(i)).collect()
    }

    /// Element from an exponent vector (entries reduced mod p are required).
    pub fn element(&self, exps: &[u8]) -> Result<Element> {
        if exps.len() > self.n || exps.iter().any(|&x| x as u64 >= self.p) {
            return Err(Error::InvalidPc("exponent vector out of range".into()));
        }
        Ok(self.wrap(Word::from_exps(exps)))
    }

    /// Normal form of a word given as (generator index, exponent) pairs.
    pub fn normal_form(&self, word: &[(usize, i64)]) -> Result<Element> {
        let mut r = Word::one();
        for &(i, e) in word {
            if i >= self.n {
                return Err(Error::UnknownGenerator(format!("g{}", i + 1)));
            }
            let g = self.col.pow(&Word::gen(i, 1), e as i128);
            r = self.col.mul(&r, &g);
        }
        Ok(self.wrap(r))
    }

    fn check(&self, x: &Element) -> Result<()> {
        if x.gid == self.gid {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn try_mul(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }
    pub fn try_inv(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.inv(a))
    }
    pub fn try_pow(&self, a: &Element, k: i128) -> Result<Element> {
        self.check(a)?;
        Ok(self.pow(a, k))
    }
    pub fn try_comm(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.comm(a, b))
    }
    pub fn try_conj(&self, a: &Element, by: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(by)?;
        Ok(self.conj(a, by))
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.wrap(self.col.mul(&self.word(a), &self.word(b)))
    }
    /// a * g_i^e for 0 <= e < p.
    pub fn mul_gen(&self, a: &Element, i: usize, e: u8) -> Element {
        let mut w = self.word(a);
        self.col.mul_gen_pow(&mut w, i, e);
        self.wrap(w)
    }
    pub fn inv(&self, a: &Element) -> Element {
        self.wrap(self.col.inv(&self.word(a)))
    }
    pub fn pow(&self, a: &Element, k: i128) -> Element {
        self.wrap(self.col.pow(&self.word(a), k))
    }
    pub fn comm(&self, a: &Element, b: &Element) -> Element {
        self.wrap(self.col.comm(&self.word(a), &self.word(b)))
    }
    /// by^-1 a by
    pub fn conj(&self, a: &Element, by: &Element) -> Element {
        let t = self.mul(a, by);
        self.mul(&self.inv(by), &t)
    }
    pub fn is_identity(&self, a: &Element) -> bool {
        a.exps.iter().all(|&x| x == 0)
    }
    /// Index of the first nonzero exponent, or n for the identity.
    pub fn depth(&self, a: &Element) -> usize {
        (0..self.n).find(|&k| a.exps[k] != 0).unwrap_or(self.n)
    }
    pub fn lead(&self, a: &Element) -> u8 {
        let d = self.depth(a);
        if d < self.n {
            a.exps[d]
        } else {
            0
        }
    }

    /// Least p^k with a^(p^k) = 1.
    pub fn order_of(&self, a: &Element) -> u128 {
        let mut x = *a;
        let mut o = 1u128;
        while !self.is_identity(&x) {
            x = self.pow(&x, self.p as i128);
            o *= self.p as u128;
        }
        o
    }

    /// Exponent vector restricted to the n generators.
    pub fn coords(&self, a: &Element) -> Vec<u8> {
        a.exps[..self.n].to_vec()
    }

    pub fn format(&self, a: &Element) -> String {
        fmt_exps(&a.exps[..self.n])
    }

    /// Enumerate all elements in lexicographic exponent order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        let total = self.order();
        let p = self.p as u128;
        let n = self.n;
        (0..total).map(move |mut idx| {
            let mut e = [0u8; MAX_GENS];
            for k in (0..n).rev() {
                e[k] = (idx % p) as u8;
                idx /= p;
            }
            Element { gid: self.gid, exps: e }
        })
    }
}
