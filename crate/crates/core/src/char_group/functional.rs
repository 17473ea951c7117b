use std::collections::BTreeMap;

use crate::exact_coeffs::{DiffVar, EpsLaurent, ExpLegend, Q};
use crate::forest_hopf::{Forest, HopfAlgebra, RootedTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Multiplicative and unital; stored on trees only.
    Character,
    /// Zero on `1` and on every product of two non-empty forests; stored on
    /// trees only.
    Infinitesimal,
    /// Arbitrary linear functional; stored on every forest up to the cap.
    General,
}

/// Linear map from H to the ε-Laurent ring.
///
/// Missing entries are zero. For characters and infinitesimal characters
/// only tree values are kept, so an inconsistent product value cannot be
/// stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    kind: Kind,
    cap: usize,
    values: BTreeMap<Forest, EpsLaurent>,
}

impl Functional {
    /// The counit character `1(X) = δ_{X,1}`.
    pub fn unit(cap: usize) -> Self {
        Self {
            kind: Kind::Character,
            cap,
            values: BTreeMap::new(),
        }
    }

    pub fn zero(cap: usize) -> Self {
        Self {
            kind: Kind::Infinitesimal,
            cap,
            values: BTreeMap::new(),
        }
    }

    /// Character or infinitesimal character from its values on trees.
    pub fn from_tree_values<I>(kind: Kind, cap: usize, values: I) -> Self
    where
        I: IntoIterator<Item = (RootedTree, EpsLaurent)>,
    {
        assert!(
            kind != Kind::General,
            "general functionals need forest values"
        );
        let mut out = Self {
            kind,
            cap,
            values: BTreeMap::new(),
        };
        for (t, v) in values {
            if t.degree() <= cap {
                out.insert(Forest::single(t), v);
            }
        }
        out
    }

    pub fn general<I>(cap: usize, values: I) -> Self
    where
        I: IntoIterator<Item = (Forest, EpsLaurent)>,
    {
        let mut out = Self {
            kind: Kind::General,
            cap,
            values: BTreeMap::new(),
        };
        for (f, v) in values {
            if f.degree() <= cap {
                out.insert(f, v);
            }
        }
        out
    }

    fn insert(&mut self, f: Forest, v: EpsLaurent) {
        if v.is_zero() && v.is_exact() {
            self.values.remove(&f);
        } else {
            self.values.insert(f, v);
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_character(&self) -> bool {
        self.kind == Kind::Character
    }

    pub fn is_infinitesimal(&self) -> bool {
        self.kind == Kind::Infinitesimal
    }

    /// Value on a forest; characters multiply over trees, infinitesimal
    /// characters vanish on products.
    pub fn eval(&self, f: &Forest) -> EpsLaurent {
        match self.kind {
            Kind::Character => {
                let mut out = EpsLaurent::one();
                for t in f.trees() {
                    out = &out * &self.tree_value(t);
                }
                out
            }
            Kind::Infinitesimal => match f.as_tree() {
                Some(_) => self.values.get(f).cloned().unwrap_or_default(),
                None => EpsLaurent::zero(),
            },
            Kind::General => self.values.get(f).cloned().unwrap_or_default(),
        }
    }

    pub fn tree_value(&self, t: &RootedTree) -> EpsLaurent {
        let key = Forest::single(t.clone());
        match self.values.get(&key) {
            Some(v) => v.clone(),
            None => EpsLaurent::zero(),
        }
    }

    /// Values on every forest up to the cap.
    pub fn table(&self, hopf: &HopfAlgebra) -> BTreeMap<Forest, EpsLaurent> {
        match self.kind {
            Kind::General => hopf
                .forests_up_to(self.cap)
                .into_iter()
                .map(|f| {
                    let v = self.eval(&f);
                    (f, v)
                })
                .collect(),
            Kind::Character => {
                let mut out: BTreeMap<Forest, EpsLaurent> = BTreeMap::new();
                for f in hopf.forests_up_to(self.cap) {
                    let v = match f.trees().split_first() {
                        None => EpsLaurent::one(),
                        Some((first, rest)) if !rest.is_empty() => {
                            let tail = Forest::from_trees(rest.to_vec());
                            &self.tree_value(first) * &out[&tail]
                        }
                        Some((first, _)) => self.tree_value(first),
                    };
                    out.insert(f, v);
                }
                out
            }
            Kind::Infinitesimal => hopf
                .forests_up_to(self.cap)
                .into_iter()
                .map(|f| {
                    let v = self.eval(&f);
                    (f, v)
                })
                .collect(),
        }
    }

    /// Same functional stored as a general one.
    pub fn to_general(&self, hopf: &HopfAlgebra) -> Functional {
        Functional::general(self.cap, self.table(hopf))
    }

    /// Applies a ring homomorphism of the value ring to every value. This
    /// keeps multiplicativity, so the kind is preserved.
    pub fn map_hom<F: Fn(&EpsLaurent) -> EpsLaurent>(&self, f: F) -> Functional {
        let mut out = Self {
            kind: self.kind,
            cap: self.cap,
            values: BTreeMap::new(),
        };
        for (k, v) in &self.values {
            out.insert(k.clone(), f(v));
        }
        out
    }

    /// Applies a linear map of the value ring to every value. Characters
    /// become general functionals.
    pub fn map_linear<F: Fn(&EpsLaurent) -> EpsLaurent>(
        &self,
        hopf: &HopfAlgebra,
        f: F,
    ) -> Functional {
        match self.kind {
            Kind::Character => self.to_general(hopf).map_hom(f),
            _ => self.map_hom(f),
        }
    }

    /// Scales the value on each degree-n forest by `factor^n`.
    pub fn theta_scale(&self, factor: &EpsLaurent) -> Functional {
        let mut powers: Vec<EpsLaurent> = vec![EpsLaurent::one()];
        let mut out = Self {
            kind: self.kind,
            cap: self.cap,
            values: BTreeMap::new(),
        };
        for (f, v) in &self.values {
            let n = f.degree();
            while powers.len() <= n {
                let next = powers.last().unwrap() * factor;
                powers.push(next);
            }
            out.insert(f.clone(), v * &powers[n]);
        }
        out
    }

    /// `f ∘ Y`, i.e. `[Z₀, f]`: each degree-n value multiplied by n.
    pub fn y_compose(&self, hopf: &HopfAlgebra) -> Functional {
        let base = match self.kind {
            Kind::Character => self.to_general(hopf),
            _ => self.clone(),
        };
        let mut out = Self {
            kind: base.kind,
            cap: base.cap,
            values: BTreeMap::new(),
        };
        for (f, v) in &base.values {
            out.insert(
                f.clone(),
                v.scale(&Q::from_integer((f.degree() as i64).into())),
            );
        }
        out
    }

    /// `f ∘ Y⁻¹` on forests of positive degree.
    pub(crate) fn y_divide(&self) -> Functional {
        let mut out = Self {
            kind: self.kind,
            cap: self.cap,
            values: BTreeMap::new(),
        };
        for (f, v) in &self.values {
            let n = f.degree() as i64;
            if n > 0 {
                out.insert(f.clone(), v.scale(&Q::new(1.into(), n.into())));
            }
        }
        out
    }

    pub fn scale(&self, hopf: &HopfAlgebra, c: &EpsLaurent) -> Functional {
        self.map_linear(hopf, |v| v * c)
    }

    pub fn neg(&self, hopf: &HopfAlgebra) -> Functional {
        self.map_linear(hopf, |v| -v)
    }

    pub fn add(&self, hopf: &HopfAlgebra, other: &Functional) -> Functional {
        self.combine(hopf, other, |a, b| a + b)
    }

    pub fn sub(&self, hopf: &HopfAlgebra, other: &Functional) -> Functional {
        self.combine(hopf, other, |a, b| a - b)
    }

    fn combine<F: Fn(&EpsLaurent, &EpsLaurent) -> EpsLaurent>(
        &self,
        hopf: &HopfAlgebra,
        other: &Functional,
        f: F,
    ) -> Functional {
        let cap = self.cap.min(other.cap);
        if self.kind == Kind::Infinitesimal && other.kind == Kind::Infinitesimal {
            let keys: std::collections::BTreeSet<&Forest> =
                self.values.keys().chain(other.values.keys()).collect();
            let mut out = Functional::zero(cap);
            for k in keys {
                out.insert(k.clone(), f(&self.eval(k), &other.eval(k)));
            }
            return out;
        }
        let (a, b) = (self.table(hopf), other.table(hopf));
        Functional::general(
            cap,
            hopf.forests_up_to(cap).into_iter().map(|k| {
                let v = f(&a[&k], &b[&k]);
                (k, v)
            }),
        )
    }

    /// Formal derivative of every value. Derivatives of characters are
    /// general functionals.
    pub fn differentiate(
        &self,
        hopf: &HopfAlgebra,
        var: DiffVar,
        legend: &ExpLegend,
    ) -> Functional {
        self.map_linear(hopf, |v| v.differentiate(var, legend))
    }

    /// `(self − other)(X)` for every forest up to `max_degree`.
    pub fn residuals(
        &self,
        hopf: &HopfAlgebra,
        other: &Functional,
        max_degree: usize,
    ) -> Vec<(Forest, EpsLaurent)> {
        hopf.forests_up_to(max_degree.min(self.cap).min(other.cap))
            .into_iter()
            .map(|f| {
                let r = &self.eval(&f) - &other.eval(&f);
                (f, r)
            })
            .collect()
    }

    /// True when the functional is zero on `1` and on every product of
    /// non-empty forests up to the cap.
    pub fn vanishes_on_products(&self, hopf: &HopfAlgebra) -> bool {
        hopf.forests_up_to(self.cap)
            .iter()
            .filter(|f| f.len() != 1)
            .all(|f| self.eval(f).is_zero())
    }

    /// Reinterprets a functional as an infinitesimal character, provided it
    /// vanishes on `1` and on products.
    pub fn into_infinitesimal(self, hopf: &HopfAlgebra) -> Option<Functional> {
        if !self.vanishes_on_products(hopf) {
            return None;
        }
        let cap = self.cap;
        let trees = hopf.trees_up_to(cap);
        Some(Functional::from_tree_values(
            Kind::Infinitesimal,
            cap,
            trees.into_iter().map(|t| {
                let v = self.tree_value(&t);
                (t, v)
            }),
        ))
    }

    /// Stored entries (trees for characters, forests for general ones).
    pub fn entries(&self) -> impl Iterator<Item = (&Forest, &EpsLaurent)> {
        self.values.iter()
    }
}
