//! Power-commutator presentations: parsing, printing and refinement to a
//! polycyclic presentation with relative orders p.

mod parse;
mod refine;

pub use parse::{eval_expr, parse_presentation, parse_word};
pub use refine::{refine, refine_with_bound, Refined};

use crate::primes::PrimeParams;
use std::collections::BTreeMap;
use std::fmt;

/// One factor of a word, before its exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Gen(usize),
    Comm(Box<WordAst>, Box<WordAst>),
    Group(Box<WordAst>),
}

/// Product of factors with evaluated integer exponents. Empty means identity.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WordAst(pub Vec<(Factor, i128)>);

impl WordAst {
    pub fn is_identity_literal(&self) -> bool {
        self.0.is_empty()
    }

    /// `self * other^-1`
    pub fn relator(&self, other: &WordAst) -> WordAst {
        WordAst(vec![(Factor::Group(Box::new(self.clone())), 1), (Factor::Group(Box::new(other.clone())), -1)])
    }

    /// Exponent-sum vector over `m` generators.
    pub fn exponent_sums(&self, m: usize) -> Vec<i128> {
        let mut v = vec![0i128; m];
        for (f, e) in &self.0 {
            match f {
                Factor::Gen(i) => v[*i] += e,
                Factor::Comm(..) => {}
                Factor::Group(w) => {
                    for (a, b) in v.iter_mut().zip(w.exponent_sums(m)) {
                        *a += b * e;
                    }
                }
            }
        }
        v
    }

    /// Evaluate in a group given images of the generators.
    pub fn eval<G: GroupOps>(&self, g: &G, images: &[G::Elem]) -> G::Elem {
        let mut r = g.one();
        for (f, e) in &self.0 {
            let base = match f {
                Factor::Gen(i) => images[*i].clone(),
                Factor::Comm(a, b) => {
                    let x = a.eval(g, images);
                    let y = b.eval(g, images);
                    g.comm(&x, &y)
                }
                Factor::Group(w) => w.eval(g, images),
            };
            let v = if *e == 1 { base } else { g.pow(&base, *e) };
            r = g.mul(&r, &v);
        }
        r
    }

    /// Generator and exponent if the word is a single power `x^e`.
    pub fn as_gen_power(&self) -> Option<(usize, i128)> {
        match self.0.as_slice() {
            [(Factor::Gen(i), e)] => Some((*i, *e)),
            _ => None,
        }
    }

    /// Generator pair if the word is a bare commutator `[x, y]`.
    pub fn as_gen_comm(&self) -> Option<(usize, usize)> {
        match self.0.as_slice() {
            [(Factor::Comm(a, b), 1)] => match (a.as_gen_power(), b.as_gen_power()) {
                (Some((x, 1)), Some((y, 1))) => Some((x, y)),
                _ => None,
            },
            _ => None,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (fac, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            match fac {
                Factor::Gen(i) => write!(f, "{}", names[*i])?,
                Factor::Comm(a, b) => {
                    write!(f, "[")?;
                    a.write(f, names)?;
                    write!(f, ", ")?;
                    b.write(f, names)?;
                    write!(f, "]")?;
                }
                Factor::Group(w) => {
                    write!(f, "(")?;
                    w.write(f, names)?;
                    write!(f, ")")?;
                }
            }
            if *e != 1 {
                write!(f, "^{}", if *e < 0 { format!("{{{e}}}") } else { e.to_string() })?;
            }
        }
        Ok(())
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a WordAst, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write(f, self.1)
            }
        }
        D(self, names)
    }
}

/// Minimal group interface used to evaluate words.
pub trait GroupOps {
    type Elem: Clone;
    fn one(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn pow(&self, a: &Self::Elem, k: i128) -> Self::Elem;
    fn comm(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

impl GroupOps for crate::collect::PcGroup {
    type Elem = crate::collect::Element;
    fn one(&self) -> Self::Elem {
        self.identity()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        crate::collect::PcGroup::mul(self, a, b)
    }
    fn pow(&self, a: &Self::Elem, k: i128) -> Self::Elem {
        crate::collect::PcGroup::pow(self, a, k)
    }
    fn comm(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        crate::collect::PcGroup::comm(self, a, b)
    }
}

/// Declared parameter range, optionally conditional on p modulo m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeDecl {
    pub param: String,
    /// Source text of the value set, e.g. `{1, nu}` or `0..4`.
    pub set: String,
    /// `(m, k)` meaning the range applies when p mod m == k.
    pub when: Option<(u64, u64)>,
}

/// A parsed, parameter-resolved presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub prime: PrimeParams,
    /// Set when the header fixes a concrete prime.
    pub fixed_prime: Option<u64>,
    pub generators: Vec<String>,
    /// Resolved parameter values in declaration order.
    pub params: Vec<(String, i128)>,
    pub ranges: Vec<RangeDecl>,
    /// Declared order as a power of p.
    pub declared_log_order: Option<u32>,
    /// Chains of equal words; each adjacent pair is one relation.
    pub chains: Vec<Vec<WordAst>>,
}

impl Presentation {
    /// Every relation as `(lhs, rhs)`.
    pub fn relations(&self) -> Vec<(&WordAst, &WordAst)> {
        self.chains.iter().flat_map(|c| c.windows(2).map(|w| (&w[0], &w[1]))).collect()
    }

    /// Relators: one per relation plus the implied trivial commutators.
    pub fn relators(&self) -> Vec<WordAst> {
        let mut out: Vec<WordAst> = self.relations().into_iter().map(|(a, b)| a.relator(b)).collect();
        let given = self.commutator_relations();
        let m = self.generators.len();
        for i in 0..m {
            for j in i + 1..m {
                if !given.contains_key(&(i, j)) && !given.contains_key(&(j, i)) {
                    let gi = WordAst(vec![(Factor::Gen(i), 1)]);
                    let gj = WordAst(vec![(Factor::Gen(j), 1)]);
                    out.push(WordAst(vec![(Factor::Comm(Box::new(gi), Box::new(gj)), 1)]));
                }
            }
        }
        out
    }

    /// Power relations `x^e = w`, keyed by generator; `w` is the chain's last word.
    pub fn power_relations(&self) -> BTreeMap<usize, Vec<(i128, WordAst)>> {
        let mut m: BTreeMap<usize, Vec<(i128, WordAst)>> = BTreeMap::new();
        for c in &self.chains {
            let last = c.last().cloned().unwrap_or_default();
            for w in &c[..c.len() - 1] {
                if let Some((x, e)) = w.as_gen_power() {
                    if e.abs() >= 2 {
                        m.entry(x).or_default().push((e, last.clone()));
                    }
                }
            }
        }
        m
    }

    /// Commutator relations `[x, y] = w`, keyed by the ordered pair as written.
    pub fn commutator_relations(&self) -> BTreeMap<(usize, usize), WordAst> {
        let mut m = BTreeMap::new();
        for c in &self.chains {
            let last = c.last().cloned().unwrap_or_default();
            for w in c {
                if let Some(k) = w.as_gen_comm() {
                    m.insert(k, last.clone());
                }
            }
        }
        m
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn param(&self, name: &str) -> Option<i128> {
        self.params.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group {} prime ", self.name)?;
        match self.fixed_prime {
            Some(p) => write!(f, "{p}")?,
            None => write!(f, "p")?,
        }
        for (n, v) in &self.params {
            write!(f, " param {n}={v}")?;
        }
        writeln!(f)?;
        writeln!(f, "generators {}", self.generators.join(", "))?;
        for r in &self.ranges {
            write!(f, "range {} in {}", r.param, r.set)?;
            if let Some((m, k)) = r.when {
                write!(f, " if p mod {m} == {k}")?;
            }
            writeln!(f)?;
        }
        if let Some(k) = self.declared_log_order {
            writeln!(f, "order p^{k}")?;
        }
        for c in &self.chains {
            let parts: Vec<String> = c.iter().map(|w| w.display(&self.generators).to_string()).collect();
            writeln!(f, "{}", parts.join(" = "))?;
        }
        Ok(())
    }
}
