//! Toy Feynman rules. A rule only chooses the ε-factor `f_T` of each tree;
//! the character value `g^n E^n f_T` carries the scaling covariance by
//! construction.

use std::collections::BTreeMap;

use crate::char_group::{Functional, Kind};
use crate::error::{Error, Result};
use crate::exact_coeffs::{parse_rational, EpsLaurent, Monomial, PolyExpr, Var, Q};
use crate::forest_hopf::{Forest, HopfAlgebra, RootedTree};
use crate::report::FlowReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kernel {
    /// `f_• = 1/ε` and `f_{B₊(F)} = f_F / (ε(deg F + 1))`.
    Ladder,
    /// Factors listed per canonical encoding.
    Explicit(BTreeMap<String, EpsLaurent>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyRule {
    pub name: String,
    pub kernel: Kernel,
}

impl ToyRule {
    pub fn ladder() -> Self {
        Self {
            name: "ladder".into(),
            kernel: Kernel::Ladder,
        }
    }

    pub fn explicit(name: impl Into<String>, factors: BTreeMap<String, EpsLaurent>) -> Self {
        Self {
            name: name.into(),
            kernel: Kernel::Explicit(factors),
        }
    }

    /// `f_T`.
    pub fn factor(&self, t: &RootedTree) -> Result<EpsLaurent> {
        match &self.kernel {
            Kernel::Ladder => {
                let inner = self.forest_factor(&t.children())?;
                let n = t.degree() as i64;
                Ok(inner.shift(-1).scale(&Q::new(1.into(), n.into())))
            }
            Kernel::Explicit(map) => map
                .get(t.encoding())
                .cloned()
                .ok_or_else(|| Error::RuleIncomplete(t.encoding().to_string())),
        }
    }

    /// `f_F`, multiplicative over the trees of `F`.
    pub fn forest_factor(&self, f: &Forest) -> Result<EpsLaurent> {
        let mut out = EpsLaurent::one();
        for t in f.trees() {
            out = &out * &self.factor(t)?;
        }
        Ok(out)
    }
}

/// `g^n E^n`.
fn scaling(n: usize) -> PolyExpr {
    let n = n as i64;
    PolyExpr::term(
        Q::from_integer(1.into()),
        Monomial::one().with_exp(Var::G, n).with_exp(Var::E, n),
    )
}

/// The character `T ↦ g^n E^n f_T` on all trees up to `cap`.
pub fn build_character(hopf: &HopfAlgebra, rule: &ToyRule, cap: usize) -> Result<Functional> {
    if cap > hopf.cap() {
        return Err(Error::CapMismatch(cap, hopf.cap()));
    }
    let values = hopf
        .trees_up_to(cap)
        .into_iter()
        .map(|t| {
            let v = rule.factor(&t)?.mul_poly(&scaling(t.degree()));
            Ok((t, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Functional::from_tree_values(Kind::Character, cap, values))
}

/// Checks that every degree-n tree value is `g^n E^n` times a factor free
/// of `g`, `E`, `t`, `q` and the hierarchy times; the residual is whatever
/// violates that shape.
pub fn covariance_check(hopf: &HopfAlgebra, phi: &Functional) -> FlowReport {
    let mut report = FlowReport::new("covariance");
    for t in hopf.trees_up_to(phi.cap()) {
        let v = phi.tree_value(&t);
        let want = scaling(t.degree());
        let (target, _) = want.as_single_term().unwrap();
        let off =
            v.map_polys(|p| p.map_terms(|m, c| (m != target).then(|| (m.clone(), c.clone()))));
        report.record(t.encoding(), off);
    }
    report
}

/// Reads a rule file: one `<tree>: { "<eps-exponent>": <rational>, ... }`
/// per line, `#` starting a comment. A coefficient may carry a factor `*t`
/// or `*t^k`, which breaks locality on purpose.
pub fn parse_rule_config(name: &str, text: &str) -> Result<ToyRule> {
    let mut factors = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let (tree, value) = Cursor::new(body, line).entry()?;
        let key = tree.encoding().to_string();
        if factors.insert(key.clone(), value).is_some() {
            return Err(Error::DuplicateTree(key));
        }
    }
    Ok(ToyRule::explicit(name, factors))
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str, line: usize) -> Self {
        Self { s, pos: 0, line }
    }

    fn err(&self, at: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.s[..at].chars().count() + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.s[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(self.pos, format!("expected '{c}'")))
        }
    }

    fn take_while<F: Fn(char) -> bool>(&mut self, f: F) -> (usize, &'a str) {
        let start = self.pos;
        let len = self.s[start..]
            .char_indices()
            .find(|&(_, c)| !f(c))
            .map_or(self.s.len() - start, |(i, _)| i);
        self.pos += len;
        (start, &self.s[start..start + len])
    }

    fn entry(mut self) -> Result<(RootedTree, EpsLaurent)> {
        self.skip_ws();
        let (at, key) = self.take_while(|c| c == '[' || c == ']');
        if key.is_empty() {
            return Err(self.err(at, "expected a tree encoding"));
        }
        let tree =
            RootedTree::parse(key).map_err(|_| self.err(at, format!("invalid tree '{key}'")))?;
        self.expect(':')?;
        self.expect('{')?;
        let mut value = EpsLaurent::zero();
        let mut seen = Vec::new();
        self.skip_ws();
        if self.peek() == Some('}') {
            self.pos += 1;
        } else {
            loop {
                let (k, term) = self.term()?;
                if seen.contains(&k) {
                    return Err(self.err(self.pos, format!("exponent {k} listed twice")));
                }
                seen.push(k);
                value = &value + &term;
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some('}') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.err(self.pos, "expected ',' or '}'")),
                }
            }
        }
        self.skip_ws();
        if self.pos != self.s.len() {
            return Err(self.err(self.pos, "trailing characters"));
        }
        Ok((tree, value))
    }

    /// `"<k>": <rational>[*t[^j]]`.
    fn term(&mut self) -> Result<(i32, EpsLaurent)> {
        self.expect('"')?;
        let (at, key) = self.take_while(|c| c != '"');
        let k: i32 = key
            .trim()
            .parse()
            .map_err(|_| self.err(at, format!("malformed exponent key \"{key}\"")))?;
        self.expect('"')?;
        self.expect(':')?;
        self.skip_ws();
        let (at, num) = self.take_while(|c| c.is_ascii_digit() || c == '-' || c == '/');
        let c = parse_rational(num)
            .ok_or_else(|| self.err(at, format!("malformed rational '{num}'")))?;
        let mut mono = Monomial::one();
        self.skip_ws();
        if self.peek() == Some('*') {
            self.pos += 1;
            self.skip_ws();
            let (at, var) = self.take_while(|c| c.is_ascii_alphanumeric() || c == '^');
            let power = match var.strip_prefix('t') {
                Some("") => Some(1),
                Some(rest) => rest.strip_prefix('^').and_then(|p| p.parse::<u32>().ok()),
                None => None,
            };
            let power = power.ok_or_else(|| self.err(at, format!("unknown factor '{var}'")))?;
            mono = mono.with_exp(Var::T, power.into());
        }
        Ok((k, EpsLaurent::monomial(PolyExpr::term(c, mono), k)))
    }
}
