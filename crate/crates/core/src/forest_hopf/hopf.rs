use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use super::tree::{b_plus, enumerate_up_to, forests_of_degree, Forest, RootedTree};
use crate::error::{Error, Result};

/// Finite integer linear combination over an ordered basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, i64>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: K) -> Self {
        let mut out = Self::zero();
        out.add(k, 1);
        out
    }

    pub fn add(&mut self, k: K, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(k.clone()).or_insert(0);
        *slot = slot.checked_add(c).expect("coefficient overflow");
        if *slot == 0 {
            self.terms.remove(&k);
        }
    }

    pub fn add_all(&mut self, other: &LinComb<K>, factor: i64) {
        for (k, c) in &other.terms {
            self.add(
                k.clone(),
                c.checked_mul(factor).expect("coefficient overflow"),
            );
        }
    }

    pub fn coeff(&self, k: &K) -> i64 {
        self.terms.get(k).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, c)| (k, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map_basis<K2: Ord + Clone, F: FnMut(&K) -> K2>(&self, mut f: F) -> LinComb<K2> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add(f(k), *c);
        }
        out
    }
}

/// Element of H.
pub type HElement = LinComb<Forest>;
/// Element of H ⊗ H.
pub type Tensor2 = LinComb<(Forest, Forest)>;

/// Product in H ⊗ H.
pub fn tensor_mul(a: &Tensor2, b: &Tensor2) -> Tensor2 {
    let mut out = Tensor2::zero();
    for ((a1, a2), ca) in a.iter() {
        for ((b1, b2), cb) in b.iter() {
            out.add((a1.product(b1), a2.product(b2)), ca * cb);
        }
    }
    out
}

/// Product in H.
pub fn h_mul(a: &HElement, b: &HElement) -> HElement {
    let mut out = HElement::zero();
    for (x, ca) in a.iter() {
        for (y, cb) in b.iter() {
            out.add(x.product(y), ca * cb);
        }
    }
    out
}

/// The graded Hopf algebra of rooted forests up to a degree cap.
///
/// Coproducts and antipodes are filled in lazily and cached per canonical
/// forest; the caches never change a value once inserted.
#[derive(Debug)]
pub struct HopfAlgebra {
    cap: usize,
    trees_by_degree: Vec<Vec<RootedTree>>,
    forests_by_degree: Vec<Vec<Forest>>,
    coproducts: RwLock<HashMap<Forest, Arc<Tensor2>>>,
    antipodes: RwLock<HashMap<Forest, Arc<HElement>>>,
}

impl HopfAlgebra {
    pub fn new(cap: usize) -> Self {
        let trees_by_degree = enumerate_up_to(cap);
        let forests_by_degree = (0..=cap)
            .map(|m| forests_of_degree(m, &trees_by_degree))
            .collect();
        HopfAlgebra {
            cap,
            trees_by_degree,
            forests_by_degree,
            coproducts: RwLock::new(HashMap::new()),
            antipodes: RwLock::new(HashMap::new()),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Trees of degree `n`, in listing order.
    pub fn trees(&self, n: usize) -> &[RootedTree] {
        self.trees_by_degree.get(n).map_or(&[], Vec::as_slice)
    }

    /// All trees of degree `1..=max` (clamped to the cap), by degree.
    pub fn trees_up_to(&self, max: usize) -> Vec<RootedTree> {
        (1..=max.min(self.cap))
            .flat_map(|n| self.trees(n).iter().cloned())
            .collect()
    }

    pub fn forests(&self, n: usize) -> &[Forest] {
        self.forests_by_degree.get(n).map_or(&[], Vec::as_slice)
    }

    /// All forests of degree `0..=max` (clamped to the cap), by degree.
    pub fn forests_up_to(&self, max: usize) -> Vec<Forest> {
        (0..=max.min(self.cap))
            .flat_map(|n| self.forests(n).iter().cloned())
            .collect()
    }

    fn check(&self, f: &Forest) -> Result<()> {
        let degree = f.degree();
        if degree > self.cap {
            return Err(Error::DegreeExceeded {
                degree,
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// `Δ`, from `Δ(B₊(F)) = B₊(F) ⊗ 1 + (id ⊗ B₊) Δ(F)` and multiplicativity.
    pub fn coproduct(&self, f: &Forest) -> Result<Arc<Tensor2>> {
        self.check(f)?;
        if let Some(hit) = self.coproducts.read().unwrap().get(f) {
            return Ok(hit.clone());
        }
        let value = match f.trees() {
            [] => Tensor2::basis((Forest::empty(), Forest::empty())),
            [t] => {
                let inner = self.coproduct(&t.children())?;
                let mut out = inner.map_basis(|(a, b)| (a.clone(), Forest::single(b_plus(b))));
                out.add((f.clone(), Forest::empty()), 1);
                out
            }
            trees => {
                let mut out = Tensor2::basis((Forest::empty(), Forest::empty()));
                for t in trees {
                    out = tensor_mul(&out, &*self.coproduct(&Forest::single(t.clone()))?);
                }
                out
            }
        };
        let value = Arc::new(value);
        self.coproducts
            .write()
            .unwrap()
            .entry(f.clone())
            .or_insert_with(|| value.clone());
        Ok(value)
    }

    /// Terms of `Δ(f)` other than `f ⊗ 1` and `1 ⊗ f`.
    pub fn reduced_coproduct(&self, f: &Forest) -> Result<Vec<(Forest, Forest, i64)>> {
        Ok(self
            .coproduct(f)?
            .iter()
            .filter(|((a, b), _)| !a.is_empty() && !b.is_empty())
            .map(|((a, b), c)| (a.clone(), b.clone(), c))
            .collect())
    }

    /// `S`, from `m(S ⊗ id)Δ = 1·ε` on trees, extended multiplicatively.
    pub fn antipode(&self, f: &Forest) -> Result<Arc<HElement>> {
        self.check(f)?;
        if let Some(hit) = self.antipodes.read().unwrap().get(f) {
            return Ok(hit.clone());
        }
        let value = match f.trees() {
            [] => HElement::basis(Forest::empty()),
            [_] => {
                let mut out = HElement::basis(f.clone());
                for (left, right, c) in self.reduced_coproduct(f)? {
                    let s_left = self.antipode(&left)?;
                    out.add_all(&h_mul(&s_left, &HElement::basis(right)), c);
                }
                let mut neg = HElement::zero();
                neg.add_all(&out, -1);
                neg
            }
            trees => {
                let mut out = HElement::basis(Forest::empty());
                for t in trees {
                    out = h_mul(&out, &*self.antipode(&Forest::single(t.clone()))?);
                }
                out
            }
        };
        let value = Arc::new(value);
        self.antipodes
            .write()
            .unwrap()
            .entry(f.clone())
            .or_insert_with(|| value.clone());
        Ok(value)
    }

    /// Linear extension of `S`.
    pub fn antipode_of(&self, e: &HElement) -> Result<HElement> {
        let mut out = HElement::zero();
        for (f, c) in e.iter() {
            out.add_all(&*self.antipode(f)?, c);
        }
        Ok(out)
    }

    /// Linear extension of `Δ`.
    pub fn coproduct_of(&self, e: &HElement) -> Result<Tensor2> {
        let mut out = Tensor2::zero();
        for (f, c) in e.iter() {
            out.add_all(&*self.coproduct(f)?, c);
        }
        Ok(out)
    }
}

/// `ε(f)`: 1 on the empty forest, 0 otherwise.
pub fn counit(f: &Forest) -> i64 {
    i64::from(f.is_empty())
}

/// The grading derivation `Y(X) = deg(X)·X`.
pub fn grading_y(e: &HElement) -> HElement {
    let mut out = HElement::zero();
    for (f, c) in e.iter() {
        out.add(f.clone(), c * f.degree() as i64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Forest {
        Forest::parse(s).unwrap()
    }

    fn pair(a: &str, b: &str) -> (Forest, Forest) {
        (t(a), t(b))
    }

    #[test]
    fn coproduct_examples() {
        let h = HopfAlgebra::new(4);
        let d = h.coproduct(&t("[]")).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.coeff(&pair("[]", "1")), 1);
        assert_eq!(d.coeff(&pair("1", "[]")), 1);

        let d = h.coproduct(&t("[[]]")).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.coeff(&pair("[]", "[]")), 1);

        let d = h.coproduct(&t("[[][]]")).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d.coeff(&pair("[[][]]", "1")), 1);
        assert_eq!(d.coeff(&pair("1", "[[][]]")), 1);
        assert_eq!(d.coeff(&pair("[].[]", "[]")), 1);
        assert_eq!(d.coeff(&pair("[]", "[[]]")), 2);
    }

    #[test]
    fn ladder3_coproduct() {
        let h = HopfAlgebra::new(3);
        let d = h.coproduct(&t("[[[]]]")).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d.coeff(&pair("[[]]", "[]")), 1);
        assert_eq!(d.coeff(&pair("[]", "[[]]")), 1);
    }

    #[test]
    fn antipode_examples() {
        let h = HopfAlgebra::new(3);
        assert_eq!(
            *h.antipode(&Forest::empty()).unwrap(),
            HElement::basis(Forest::empty())
        );
        let s = h.antipode(&t("[]")).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(&t("[]")), -1);
        let s = h.antipode(&t("[[]]")).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.coeff(&t("[[]]")), -1);
        assert_eq!(s.coeff(&t("[].[]")), 1);
    }

    #[test]
    fn counit_and_grading() {
        assert_eq!(counit(&Forest::empty()), 1);
        assert_eq!(counit(&t("[]")), 0);
        assert_eq!(counit(&t("[[]]")), 0);
        assert!(grading_y(&HElement::basis(Forest::empty())).is_empty());
        assert_eq!(grading_y(&HElement::basis(t("[]"))).coeff(&t("[]")), 1);
        assert_eq!(grading_y(&HElement::basis(t("[[]]"))).coeff(&t("[[]]")), 2);
    }

    #[test]
    fn refuses_forests_above_cap() {
        let h = HopfAlgebra::new(2);
        assert_eq!(
            h.coproduct(&t("[[[]]]")).unwrap_err(),
            Error::DegreeExceeded { degree: 3, cap: 2 }
        );
        assert!(h.antipode(&t("[].[].[]")).is_err());
    }

    #[test]
    fn forest_counts() {
        let h = HopfAlgebra::new(6);
        let counts: Vec<usize> = (0..=6).map(|n| h.forests(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48]);
    }
}
