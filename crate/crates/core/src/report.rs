//! Outcome of an identity check: per-entry residuals that must vanish
//! identically.

use serde::Serialize;

use crate::exact_coeffs::EpsLaurent;
use crate::forest_hopf::Forest;

/// A nonzero residual, keyed by canonical forest encoding (or `Z0` for the
/// grading component of an extended element).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub tree: String,
    pub residual: EpsLaurent,
    /// Flow index, for identities stated per hierarchy time.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowReport {
    pub identity: String,
    pub pass: bool,
    /// Number of entries compared.
    pub checked: usize,
    pub witnesses: Vec<Witness>,
}

impl FlowReport {
    pub fn new(identity: impl Into<String>) -> Self {
        Self {
            identity: identity.into(),
            pass: true,
            checked: 0,
            witnesses: Vec::new(),
        }
    }

    /// Records one comparison; a nonzero residual fails the report.
    pub fn record(&mut self, key: impl Into<String>, residual: EpsLaurent) {
        self.checked += 1;
        if !residual.is_zero() {
            self.pass = false;
            self.witnesses.push(Witness {
                tree: key.into(),
                residual,
                n: None,
                note: None,
            });
        }
    }

    /// Records a failure that has no natural residual.
    pub fn fail(&mut self, key: impl Into<String>, residual: EpsLaurent, note: impl Into<String>) {
        self.checked += 1;
        self.pass = false;
        self.witnesses.push(Witness {
            tree: key.into(),
            residual,
            n: None,
            note: Some(note.into()),
        });
    }

    /// Like [`record`](Self::record), tagging a failure with the flow index.
    pub fn record_n(&mut self, key: impl Into<String>, n: usize, residual: EpsLaurent) {
        let failed = !residual.is_zero();
        self.record(key, residual);
        if failed {
            if let Some(w) = self.witnesses.last_mut() {
                w.n = Some(n);
            }
        }
    }

    pub fn record_forests<I>(&mut self, residuals: I)
    where
        I: IntoIterator<Item = (Forest, EpsLaurent)>,
    {
        for (f, r) in residuals {
            self.record(f.encoding(), r);
        }
    }

    pub fn from_forests<I>(identity: impl Into<String>, residuals: I) -> Self
    where
        I: IntoIterator<Item = (Forest, EpsLaurent)>,
    {
        let mut out = Self::new(identity);
        out.record_forests(residuals);
        out
    }

    /// Report for a computation that could not be carried out at all.
    pub fn error(identity: impl Into<String>, message: impl Into<String>) -> Self {
        let mut out = Self::new(identity);
        out.fail("", EpsLaurent::zero(), message);
        out
    }
}
