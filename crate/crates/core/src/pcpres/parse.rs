//! Parser for the presentation format described in docs/format.md.

use super::{Factor, Presentation, RangeDecl, WordAst};
use crate::error::{Error, Result};
use crate::primes::PrimeParams;
use std::collections::HashSet;

struct Env<'a> {
    prime: &'a PrimeParams,
    params: &'a [(String, i128)],
}

impl Env<'_> {
    fn lookup(&self, name: &str) -> Option<i128> {
        match name {
            "p" => Some(self.prime.p as i128),
            "nu" | "ν" => Some(self.prime.nu as i128),
            "omega" | "ω" => Some(self.prime.omega as i128),
            _ => self.params.iter().find(|(n, _)| n == name).map(|(_, v)| *v),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

struct Cursor<'a> {
    s: Vec<char>,
    i: usize,
    line: usize,
    gens: &'a [String],
    env: &'a Env<'a>,
}

impl Cursor<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, msg: msg.into() }
    }
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_whitespace() {
            self.i += 1;
        }
    }
    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }
    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.s.len() && is_ident_char(self.s[self.i]) {
            self.i += 1;
        }
        (self.i > start).then(|| self.s[start..self.i].iter().collect())
    }
    fn done(&mut self) -> bool {
        self.peek().is_none()
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<i128> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v = v.checked_add(self.term()?).ok_or_else(|| self.err("overflow"))?;
            } else if self.peek() == Some('-') {
                self.i += 1;
                v = v.checked_sub(self.term()?).ok_or_else(|| self.err("overflow"))?;
            } else {
                return Ok(v);
            }
        }
    }
    fn term(&mut self) -> Result<i128> {
        let mut v = self.unary()?;
        while self.eat('*') {
            v = v.checked_mul(self.unary()?).ok_or_else(|| self.err("overflow"))?;
        }
        Ok(v)
    }
    fn unary(&mut self) -> Result<i128> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.unary()?;
            if e < 0 {
                return Err(self.err("negative exponent in arithmetic"));
            }
            return checked_pow(base, e).ok_or_else(|| self.err("overflow"));
        }
        Ok(base)
    }
    fn atom(&mut self) -> Result<i128> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some('{') => {
                self.i += 1;
                let v = self.expr()?;
                self.expect('}')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                    self.i += 1;
                }
                let t: String = self.s[start..self.i].iter().collect();
                t.parse().map_err(|_| self.err("integer too large"))
            }
            Some(c) if is_ident_char(c) => {
                let name = self.ident().unwrap_or_default();
                self.env.lookup(&name).ok_or(Error::UnknownParam(name))
            }
            _ => Err(self.err("malformed expression")),
        }
    }

    // Exponent after '^': integer, identifier, signed exponent, or braced expression.
    fn exponent(&mut self) -> Result<i128> {
        match self.peek() {
            Some('-') => {
                self.i += 1;
                Ok(-self.exponent()?)
            }
            Some('{') | Some('(') => self.atom(),
            Some(c) if is_ident_char(c) => self.atom(),
            _ => Err(self.err("malformed exponent")),
        }
    }

    fn word(&mut self) -> Result<WordAst> {
        let mut out = Vec::new();
        let mut any = false;
        loop {
            match self.peek() {
                None | Some(',') | Some(']') | Some(')') | Some('=') => break,
                Some('*') | Some('·') => {
                    if !any {
                        return Err(self.err("malformed word"));
                    }
                    self.i += 1;
                    continue;
                }
                _ => {}
            }
            let fac = match self.peek() {
                Some('[') => {
                    self.i += 1;
                    let a = self.word()?;
                    self.expect(',')?;
                    let b = self.word()?;
                    self.expect(']')?;
                    Some(Factor::Comm(Box::new(a), Box::new(b)))
                }
                Some('(') => {
                    self.i += 1;
                    let a = self.word()?;
                    self.expect(')')?;
                    Some(Factor::Group(Box::new(a)))
                }
                Some(c) if is_ident_char(c) => {
                    let name = self.ident().unwrap_or_default();
                    if name == "1" {
                        None
                    } else if let Some(k) = self.gens.iter().position(|g| *g == name) {
                        Some(Factor::Gen(k))
                    } else if name.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(self.err(format!("malformed word near `{name}`")));
                    } else {
                        return Err(Error::UnknownGenerator(name));
                    }
                }
                _ => return Err(self.err("malformed word")),
            };
            any = true;
            let e = if self.eat('^') { self.exponent()? } else { 1 };
            if let Some(f) = fac {
                if e != 0 {
                    out.push((f, e));
                }
            }
        }
        if !any {
            return Err(self.err("empty word"));
        }
        Ok(WordAst(out))
    }
}

fn checked_pow(b: i128, e: i128) -> Option<i128> {
    let mut r: i128 = 1;
    for _ in 0..e {
        r = r.checked_mul(b)?;
    }
    Some(r)
}

/// Split at top-level occurrences of `sep`.
fn split_top(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '[' | '(' | '{' => depth += 1,
            ']' | ')' | '}' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out
}

/// Evaluate an exponent expression with p, nu, omega and the given parameters.
pub fn eval_expr(text: &str, prime: &PrimeParams, params: &[(String, i128)]) -> Result<i128> {
    let env = Env { prime, params };
    let mut c = Cursor { s: text.chars().collect(), i: 0, line: 0, gens: &[], env: &env };
    let v = c.expr()?;
    if !c.done() {
        return Err(c.err(format!("trailing input in `{text}`")));
    }
    Ok(v)
}

/// Parse a word over the given generator names.
pub fn parse_word(text: &str, gens: &[String], prime: &PrimeParams, params: &[(String, i128)]) -> Result<WordAst> {
    let env = Env { prime, params };
    let mut c = Cursor { s: text.chars().collect(), i: 0, line: 0, gens, env: &env };
    let w = c.word()?;
    if !c.done() {
        return Err(c.err(format!("trailing input in `{text}`")));
    }
    Ok(w)
}

fn eval_set(set: &str, prime: &PrimeParams, params: &[(String, i128)], line: usize) -> Result<Vec<i128>> {
    let s = set.trim();
    let perr = |m: &str| Error::Parse { line, msg: m.to_string() };
    if let Some(inner) = s.strip_prefix('{').and_then(|x| x.strip_suffix('}')) {
        split_top(inner, ',').iter().map(|t| eval_expr(t.trim(), prime, params)).collect()
    } else if let Some((a, b)) = s.split_once("..") {
        let lo = eval_expr(a.trim(), prime, params)?;
        let hi = eval_expr(b.trim(), prime, params)?;
        if hi - lo > 100_000 {
            return Err(perr("range too large"));
        }
        Ok((lo..=hi).collect())
    } else {
        Err(perr("range must be `{a, b, ...}` or `lo..hi`"))
    }
}

impl Presentation {
    /// Values allowed for `name` at this prime, if a range applies.
    pub fn param_range(&self, name: &str) -> Option<Vec<i128>> {
        let p = self.prime.p;
        let base: Vec<(String, i128)> = vec![];
        self.ranges
            .iter()
            .filter(|r| r.param == name)
            .find(|r| r.when.is_none_or(|(m, k)| p % m == k))
            .and_then(|r| eval_set(&r.set, &self.prime, &base, 0).ok())
    }
}

/// Parse presentation text at the given prime with parameter bindings
/// (each value is an expression, e.g. `nu` or `omega^2`).
pub fn parse_presentation(text: &str, prime: PrimeParams, bindings: &[(&str, &str)]) -> Result<Presentation> {
    let mut name = None;
    let mut fixed_prime = None;
    let mut defaults: Vec<(String, String)> = Vec::new();
    let mut generators: Option<Vec<String>> = None;
    let mut ranges = Vec::new();
    let mut declared_log_order = None;
    let mut raw_relations: Vec<(usize, String)> = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |m: String| Error::Parse { line: line_no, msg: m };
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "group" => {
                if name.is_some() {
                    return Err(perr("duplicate header".into()));
                }
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() < 3 || toks[1] != "prime" {
                    return Err(perr("header must be `group <name> prime <p|number> [param k=v]...`".into()));
                }
                name = Some(toks[0].to_string());
                if toks[2] != "p" {
                    let v: u64 = toks[2].parse().map_err(|_| perr(format!("bad prime `{}`", toks[2])))?;
                    fixed_prime = Some(v);
                }
                let tail = toks[3..].join(" ");
                for part in tail.split("param").map(str::trim).filter(|s| !s.is_empty()) {
                    let (k, v) = part.split_once('=').ok_or_else(|| perr(format!("bad param `{part}`")))?;
                    defaults.push((k.trim().to_string(), v.trim().to_string()));
                }
            }
            "generators" => {
                if generators.is_some() {
                    return Err(perr("duplicate generators line".into()));
                }
                let gs: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
                let mut seen = HashSet::new();
                for g in &gs {
                    if g.is_empty() || !g.chars().all(is_ident_char) || g.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(perr(format!("bad generator name `{g}`")));
                    }
                    if ["p", "nu", "omega", "ν", "ω"].contains(&g.as_str()) {
                        return Err(perr(format!("reserved name `{g}`")));
                    }
                    if !seen.insert(g.clone()) {
                        return Err(perr(format!("generator `{g}` declared twice")));
                    }
                }
                generators = Some(gs);
            }
            "range" => {
                let (pname, after) = rest.split_once(" in ").ok_or_else(|| perr("expected `range <name> in <set>`".into()))?;
                let (set, cond) = match after.split_once(" if ") {
                    Some((s, c)) => (s.trim(), Some(c.trim())),
                    None => (after.trim(), None),
                };
                let when = match cond {
                    None => None,
                    Some(c) => {
                        let t: Vec<&str> = c.split_whitespace().collect();
                        if t.len() != 5 || t[0] != "p" || t[1] != "mod" || t[3] != "==" {
                            return Err(perr("condition must be `p mod <m> == <k>`".into()));
                        }
                        let m = t[2].parse().map_err(|_| perr("bad modulus".into()))?;
                        let k = t[4].parse().map_err(|_| perr("bad residue".into()))?;
                        Some((m, k))
                    }
                };
                ranges.push(RangeDecl { param: pname.trim().to_string(), set: set.to_string(), when });
            }
            "order" => {
                let r = rest.replace(' ', "");
                let k = if let Some(e) = r.strip_prefix("p^") {
                    e.trim_matches(|c| c == '{' || c == '}').parse::<u32>().map_err(|_| perr("bad order".into()))?
                } else {
                    return Err(perr("order must be written `p^k`".into()));
                };
                declared_log_order = Some(k);
            }
            _ => raw_relations.push((line_no, line.to_string())),
        }
    }

    let name = name.ok_or(Error::Parse { line: 1, msg: "missing `group` header".into() })?;
    if let Some(fp) = fixed_prime {
        if fp != prime.p {
            return Err(Error::Parse { line: 1, msg: format!("presentation is fixed to p={fp}, requested p={}", prime.p) });
        }
    }
    let generators = generators.ok_or(Error::Parse { line: 1, msg: "missing `generators` line".into() })?;

    // Resolve parameters: defaults overridden by bindings.
    let mut params: Vec<(String, i128)> = Vec::new();
    for (b, _) in bindings {
        if !defaults.iter().any(|(k, _)| k == b) {
            return Err(Error::UnknownParam(b.to_string()));
        }
    }
    for (k, dv) in &defaults {
        let src = bindings.iter().find(|(b, _)| b == k).map(|(_, v)| v.to_string()).unwrap_or(dv.clone());
        let v = eval_expr(&src, &prime, &params)?;
        params.push((k.clone(), v));
    }
    for r in &ranges {
        if !defaults.iter().any(|(k, _)| *k == r.param) {
            return Err(Error::UnknownParam(r.param.clone()));
        }
    }
    for (k, v) in &params {
        let applicable: Vec<&RangeDecl> = ranges.iter().filter(|r| r.param == *k).collect();
        if applicable.is_empty() {
            continue;
        }
        let chosen = applicable.iter().find(|r| r.when.is_none_or(|(m, res)| prime.p % m == res));
        let Some(r) = chosen else {
            return Err(Error::ParamOutOfRange { name: k.clone(), value: *v as i64, range: "no range for this prime".into() });
        };
        let vals = eval_set(&r.set, &prime, &[], 0)?;
        let pm = prime.p as i128;
        if !vals.iter().any(|s| s == v || (s - v).rem_euclid(pm) == 0) {
            return Err(Error::ParamOutOfRange { name: k.clone(), value: *v as i64, range: r.set.clone() });
        }
    }

    let env = Env { prime: &prime, params: &params };
    let mut chains = Vec::new();
    let mut keys: HashSet<String> = HashSet::new();
    for (line_no, text) in raw_relations {
        for chain_src in split_top(&text, ',') {
            let parts = split_top(&chain_src, '=');
            if parts.len() < 2 {
                return Err(Error::Parse { line: line_no, msg: format!("relation `{}` has no `=`", chain_src.trim()) });
            }
            let mut chain = Vec::new();
            let last = parts.len() - 1;
            for (pi, part) in parts.into_iter().enumerate() {
                let mut c = Cursor { s: part.chars().collect(), i: 0, line: line_no, gens: &generators, env: &env };
                let w = c.word()?;
                if !c.done() {
                    return Err(c.err(format!("malformed word `{}`", part.trim())));
                }
                let key = if let Some((x, y)) = w.as_gen_comm() {
                    let (a, b) = if x < y { (x, y) } else { (y, x) };
                    Some(format!("[{}, {}]", generators[a], generators[b]))
                } else if let Some((x, e)) = w.as_gen_power().filter(|(_, e)| e.abs() >= 2) {
                    Some(format!("{}^{}", generators[x], e))
                } else {
                    None
                };
                if let Some(k) = key.filter(|_| pi < last) {
                    if !keys.insert(k.clone()) {
                        return Err(Error::DuplicateRelation(k));
                    }
                }
                chain.push(w);
            }
            chains.push(chain);
        }
    }

    Ok(Presentation { name, prime, fixed_prime, generators, params, ranges, declared_log_order, chains })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::resolve_params;

    const G33: &str = "group G_(3,3) prime p
generators a1, a2, a3, a4, b1
order p^6
[a3,a4] = a2, [a2,a4] = a1 = b1^{p^2}, a4^p = b1, b1^{p^3} = a2^p = a3^p = 1
";

    #[test]
    fn parses_g33() {
        let pr = parse_presentation(G33, resolve_params(5).unwrap(), &[]).unwrap();
        assert_eq!(pr.generators, vec!["a1", "a2", "a3", "a4", "b1"]);
        assert_eq!(pr.chains.len(), 4);
        let c = pr.commutator_relations();
        assert_eq!(c[&(2, 3)], WordAst(vec![(Factor::Gen(1), 1)]));
        assert_eq!(c[&(1, 3)], WordAst(vec![(Factor::Gen(4), 25)]));
        let pw = pr.power_relations();
        assert_eq!(pw[&3], vec![(5, WordAst(vec![(Factor::Gen(4), 1)]))]);
        assert_eq!(pw[&4], vec![(125, WordAst::default())]);
        assert_eq!(pr.relations().len(), 7);
    }

    #[test]
    fn unicode_names_and_params() {
        let t = "group X prime p param r=1\ngenerators α1, α2\nrange r in {1, ν}\n[α2, α1] = 1, α1^p = α2^r, α2^p = 1\n";
        let pr = parse_presentation(t, resolve_params(7).unwrap(), &[("r", "nu")]).unwrap();
        assert_eq!(pr.param("r"), Some(3));
        let e = parse_presentation(t, resolve_params(7).unwrap(), &[("r", "2")]);
        assert!(matches!(e, Err(Error::ParamOutOfRange { .. })));
    }

    #[test]
    fn errors() {
        let p5 = resolve_params(5).unwrap();
        let e = parse_presentation("group X prime p\ngenerators a\na^p = c\n", p5, &[]);
        assert_eq!(e, Err(Error::UnknownGenerator("c".into())));
        let e = parse_presentation("group X prime p\ngenerators a\na^p = *\n", p5, &[]);
        assert!(matches!(e, Err(Error::Parse { .. })));
        let e = parse_presentation("group X prime p\ngenerators a, b\n[a,b] = 1\n[b,a] = b^p\n", p5, &[]);
        assert!(matches!(e, Err(Error::DuplicateRelation(_))));
        let e = parse_presentation("group X prime p\ngenerators a\na^p = 1, a^p = a^{2*p}\n", p5, &[]);
        assert!(matches!(e, Err(Error::DuplicateRelation(_))));
    }

    #[test]
    fn round_trip() {
        let p5 = resolve_params(5).unwrap();
        let pr = parse_presentation(G33, p5, &[]).unwrap();
        let text = pr.to_string();
        let again = parse_presentation(&text, p5, &[]).unwrap();
        assert_eq!(pr, again);
    }

    #[test]
    fn conditional_ranges() {
        let t = "group X prime p param r=1\ngenerators a\nrange r in {1, omega, omega^2} if p mod 3 == 1\nrange r in {1} if p mod 3 == 2\na^p = 1\n";
        let p7 = resolve_params(7).unwrap();
        let pr = parse_presentation(t, p7, &[]).unwrap();
        assert_eq!(pr.param_range("r"), Some(vec![1, 3, 9]));
        let p5 = resolve_params(5).unwrap();
        assert!(parse_presentation(t, p5, &[("r", "2")]).is_err());
    }
}
