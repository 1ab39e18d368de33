//! p-quotient refinement: builds successive central elementary abelian
//! layers until the lower exponent-p central series stabilizes.

use super::{GroupOps, Presentation, WordAst};
use crate::collect::{Collector, Element, PcGroup, PcRules, Tail, TailVec, Word, MAX_GENS};
use crate::error::{Error, Result};
use crate::linalg::rref;
use std::collections::BTreeMap;

/// A refined group together with the images of the declared generators.
#[derive(Debug)]
pub struct Refined {
    pub group: PcGroup,
    pub names: Vec<String>,
    pub images: Vec<Element>,
    pub presentation: Presentation,
}

impl Refined {
    pub fn named(&self, name: &str) -> Option<Element> {
        self.names.iter().position(|n| n == name).map(|i| self.images[i])
    }

    /// Evaluate a word in the declared generators.
    pub fn eval(&self, w: &WordAst) -> Element {
        w.eval(&self.group, &self.images)
    }

    /// Parse and evaluate a word such as `a4^p*a3`.
    pub fn element(&self, text: &str) -> Result<Element> {
        let w = super::parse_word(text, &self.names, &self.presentation.prime, &self.presentation.params)?;
        Ok(self.eval(&w))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Def {
    Image(usize),
    Power(usize),
    Comm(usize, usize),
}

struct Cover<'a>(&'a Collector<TailVec>);

impl GroupOps for Cover<'_> {
    type Elem = Word<TailVec>;
    fn one(&self) -> Self::Elem {
        Word::one()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.0.mul(a, b)
    }
    fn pow(&self, a: &Self::Elem, k: i128) -> Self::Elem {
        self.0.pow(a, k)
    }
    fn comm(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.0.comm(a, b)
    }
}

/// Refine with the default bound |G| <= p^6.
pub fn refine(pres: &Presentation) -> Result<Refined> {
    refine_with_bound(pres, 6)
}

fn padded(t: &TailVec, len: usize) -> Vec<u64> {
    let mut v: Vec<u64> = t.0.iter().map(|&x| x as u64).collect();
    v.resize(len, 0);
    v
}

/// Refine, failing when the group order would exceed p^bound.
pub fn refine_with_bound(pres: &Presentation, bound: usize) -> Result<Refined> {
    let p = pres.prime.p;
    if p > 251 {
        return Err(Error::InvalidPc("prime too large for the collector".into()));
    }
    let bound = bound.min(MAX_GENS);
    let pu = p as u8;
    let m = pres.generators.len();
    let relators = pres.relators();

    let mut rows: Vec<Vec<u64>> =
        relators.iter().map(|r| r.exponent_sums(m).iter().map(|x| x.rem_euclid(p as i128) as u64).collect()).collect();
    let pivots = if rows.is_empty() { vec![] } else { rref(&mut rows, p) };
    let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
    let mut n = free.len();
    if n > bound {
        return Err(Error::OrderBound(bound));
    }
    let mut defs: Vec<Def> = free.iter().map(|&x| Def::Image(x)).collect();
    let mut images: Vec<Vec<u8>> = vec![vec![0; n]; m];
    for (q, &x) in free.iter().enumerate() {
        images[x][q] = 1;
    }
    for (r, &pc) in pivots.iter().enumerate() {
        for (q, &f) in free.iter().enumerate() {
            images[pc][q] = ((p - rows[r][f]) % p) as u8;
        }
    }
    let mut power: Vec<Vec<u8>> = vec![vec![0; n]; n];
    let mut comm: BTreeMap<(usize, usize), Vec<u8>> = BTreeMap::new();

    while n > 0 {
        let mut cols: Vec<Def> = Vec::new();
        for x in 0..m {
            if !defs.contains(&Def::Image(x)) {
                cols.push(Def::Image(x));
            }
        }
        for i in 0..n {
            if !defs.contains(&Def::Power(i)) {
                cols.push(Def::Power(i));
            }
        }
        for j in 0..n {
            for i in 0..j {
                if !defs.contains(&Def::Comm(j, i)) {
                    cols.push(Def::Comm(j, i));
                }
            }
        }
        let t = cols.len();
        let unit = |d: Def| -> TailVec {
            let mut v = vec![0u8; t];
            if let Some(c) = cols.iter().position(|&x| x == d) {
                v[c] = 1;
            }
            TailVec(v)
        };
        let pw: Vec<Word<TailVec>> = (0..n).map(|i| Word { e: Word::<()>::from_exps(&power[i]).e, t: unit(Def::Power(i)) }).collect();
        let mut cm = BTreeMap::new();
        for j in 0..n {
            for i in 0..j {
                let e = comm.get(&(j, i)).map(|w| Word::<()>::from_exps(w).e).unwrap_or([0; MAX_GENS]);
                cm.insert((j, i), Word { e, t: unit(Def::Comm(j, i)) });
            }
        }
        let col = Collector::new(pu, n, pw, &cm)?;
        let mut rel_rows: Vec<Vec<u64>> = Vec::new();
        for (idx, l, r) in col.overlaps() {
            if l.e != r.e {
                return Err(Error::InvalidPc(format!("inconsistent quotient at overlap {idx:?}")));
            }
            let mut d = l.t.clone();
            d.add_assign(&r.t.neg(pu), pu);
            if !d.is_zero() {
                rel_rows.push(padded(&d, t));
            }
        }
        let imgs: Vec<Word<TailVec>> = (0..m).map(|x| Word { e: Word::<()>::from_exps(&images[x]).e, t: unit(Def::Image(x)) }).collect();
        let cover = Cover(&col);
        for rel in &relators {
            let w = rel.eval(&cover, &imgs);
            if w.e.iter().any(|&x| x != 0) {
                return Err(Error::InvalidPc("relator nontrivial in quotient".into()));
            }
            if !w.t.is_zero() {
                rel_rows.push(padded(&w.t, t));
            }
        }
        let piv = if rel_rows.is_empty() { vec![] } else { rref(&mut rel_rows, p) };
        let new_cols: Vec<usize> = (0..t).filter(|c| !piv.contains(c)).collect();
        if new_cols.is_empty() {
            break;
        }
        let k = new_cols.len();
        let n_new = n + k;
        if n_new > bound {
            return Err(Error::OrderBound(bound));
        }
        // Expression of each tail column in the new generators.
        let mut expr: Vec<Vec<u8>> = vec![vec![0; k]; t];
        for (q, &c) in new_cols.iter().enumerate() {
            expr[c][q] = 1;
        }
        for (r, &pc) in piv.iter().enumerate() {
            for (q, &f) in new_cols.iter().enumerate() {
                expr[pc][q] = ((p - rel_rows[r][f]) % p) as u8;
            }
        }
        let extend = |w: &[u8], d: Def| -> Vec<u8> {
            let mut v = w.to_vec();
            v.resize(n_new, 0);
            if let Some(c) = cols.iter().position(|&x| x == d) {
                v[n..].copy_from_slice(&expr[c]);
            }
            v
        };
        let mut new_power: Vec<Vec<u8>> = (0..n).map(|i| extend(&power[i], Def::Power(i))).collect();
        new_power.extend((0..k).map(|_| vec![0u8; n_new]));
        let mut new_comm = BTreeMap::new();
        for j in 0..n {
            for i in 0..j {
                let old = comm.get(&(j, i)).cloned().unwrap_or_else(|| vec![0; n]);
                let v = extend(&old, Def::Comm(j, i));
                if v.iter().any(|&x| x != 0) {
                    new_comm.insert((j, i), v);
                }
            }
        }
        images = (0..m).map(|x| extend(&images[x], Def::Image(x))).collect();
        defs.extend(new_cols.iter().map(|&c| cols[c]));
        power = new_power;
        comm = new_comm;
        n = n_new;
    }

    let group = PcGroup::from_rules(PcRules { p, n, power, comm })?;
    let images: Vec<Element> = images.iter().map(|v| group.element(v)).collect::<Result<_>>()?;
    for rel in &relators {
        let w = rel.eval(&group, &images);
        if !group.is_identity(&w) {
            return Err(Error::InvalidPc(format!("relator {} fails in refined group", rel.display(&pres.generators))));
        }
    }
    if let Some(k) = pres.declared_log_order {
        if k as usize != n {
            return Err(Error::OrderMismatch { expected: format!("p^{k}"), found: format!("p^{n}") });
        }
    }
    Ok(Refined { group, names: pres.generators.clone(), images, presentation: pres.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcpres::parse_presentation;
    use crate::primes::resolve_params;

    fn build(text: &str, p: u64) -> Result<Refined> {
        refine(&parse_presentation(text, resolve_params(p).unwrap(), &[])?)
    }

    #[test]
    fn cyclic_p2() {
        let r = build("group C prime p\ngenerators a\na^{p^2} = 1\n", 5).unwrap();
        assert_eq!(r.group.n(), 2);
        let a = r.named("a").unwrap();
        assert_eq!(r.group.order_of(&a), 25);
        assert_eq!(r.group.coords(&a), vec![1, 0]);
        assert_eq!(r.group.rules().power[0], vec![0, 1]);
    }

    #[test]
    fn extraspecial() {
        let r = build("group E prime p\ngenerators g1, g2, g3\n[g2, g1] = g3, g1^p = g2^p = g3^p = 1\n", 5).unwrap();
        assert_eq!(r.group.order(), 125);
    }

    #[test]
    fn trivial_and_cp() {
        let r = build("group T prime p\ngenerators a\na = 1\n", 3).unwrap();
        assert_eq!(r.group.order(), 1);
        let r = build("group C prime p\ngenerators g\ng^p = 1\n", 7).unwrap();
        assert_eq!(r.group.order(), 7);
    }

    #[test]
    fn order_bound_and_mismatch() {
        let e = build("group F prime p\ngenerators a, b\n", 3);
        assert!(matches!(e, Err(Error::OrderBound(6))));
        let e = build("group C prime p\ngenerators a\norder p^3\na^{p^2} = 1\n", 5);
        assert!(matches!(e, Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn g33_order() {
        let t = "group G_(3,3) prime p\ngenerators a1, a2, a3, a4, b1\n[a3,a4] = a2, [a2,a4] = a1 = b1^{p^2}, a4^p = b1, b1^{p^3} = a2^p = a3^p = 1\n";
        let r = build(t, 5).unwrap();
        assert_eq!(r.group.order(), 15625);
        let g = &r.group;
        let a4 = r.named("a4").unwrap();
        assert_eq!(g.order_of(&a4), 625);
        assert_eq!(g.order_of(&r.named("b1").unwrap()), 125);
        assert_eq!(g.comm(&r.named("a3").unwrap(), &a4), r.named("a2").unwrap());
        assert_eq!(g.pow(&a4, 5), r.named("b1").unwrap());
    }
}
