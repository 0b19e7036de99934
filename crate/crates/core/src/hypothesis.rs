//! Hypotheses (set-valued predictors) and ordered hypothesis classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::label_set::LabelSet;

/// Stable identifier of a hypothesis; appears in reports and CSV output.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HypothesisId(pub String);

impl fmt::Display for HypothesisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for HypothesisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for HypothesisId {
    fn from(s: &str) -> Self {
        HypothesisId(s.to_owned())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HypothesisKind {
    /// Backed by an explicit input → label-set table.
    Extensional,
    /// Backed by a rule evaluated on demand (e.g. "the first half of the
    /// label block belonging to input x").
    Intensional,
}

#[derive(Clone)]
enum Rule {
    Table(Arc<BTreeMap<u64, LabelSet>>),
    Fn(Arc<dyn Fn(u64) -> LabelSet + Send + Sync>),
}

/// A deterministic map from input ids to label sets.
///
/// Evaluation is pure: the same input always yields the same set. Table
/// hypotheses return the empty set on inputs absent from the table.
#[derive(Clone)]
pub struct Hypothesis {
    id: HypothesisId,
    rule: Rule,
}

impl Hypothesis {
    pub fn table(id: impl Into<String>, map: BTreeMap<u64, LabelSet>) -> Self {
        Self {
            id: HypothesisId(id.into()),
            rule: Rule::Table(Arc::new(map)),
        }
    }

    pub fn intensional(
        id: impl Into<String>,
        f: impl Fn(u64) -> LabelSet + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: HypothesisId(id.into()),
            rule: Rule::Fn(Arc::new(f)),
        }
    }

    /// Outputs the same set on every input.
    pub fn constant(id: impl Into<String>, set: LabelSet) -> Self {
        Self::intensional(id, move |_| set.clone())
    }

    pub fn id(&self) -> &HypothesisId {
        &self.id
    }

    pub fn kind(&self) -> HypothesisKind {
        match self.rule {
            Rule::Table(_) => HypothesisKind::Extensional,
            Rule::Fn(_) => HypothesisKind::Intensional,
        }
    }

    pub fn eval(&self, x: u64) -> LabelSet {
        match &self.rule {
            Rule::Table(map) => map.get(&x).cloned().unwrap_or_default(),
            Rule::Fn(f) => f(x),
        }
    }

    /// |h(x)|.
    pub fn output_size(&self, x: u64) -> u128 {
        self.eval(x).len()
    }

    /// A copy of this hypothesis under a different id (e.g. promoting a
    /// class member to the target rule of a world).
    pub fn with_id(&self, id: impl Into<String>) -> Self {
        Self {
            id: HypothesisId(id.into()),
            rule: self.rule.clone(),
        }
    }
}

impl fmt::Debug for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypothesis")
            .field("id", &self.id)
            .field("kind", &self.kind())
            .finish()
    }
}

/// An ordered, non-empty collection of hypotheses with unique ids.
///
/// Order is semantic: every learner breaks ties in favor of the earliest
/// member, so a class is a list, not a set.
#[derive(Clone, Debug)]
pub struct HypothesisClass {
    members: Vec<Hypothesis>,
}

impl HypothesisClass {
    pub fn new(members: Vec<Hypothesis>) -> Result<Self> {
        if members.is_empty() {
            return Err(CoreError::EmptyClass);
        }
        let mut seen = BTreeSet::new();
        for h in &members {
            if !seen.insert(h.id().clone()) {
                return Err(CoreError::DuplicateId(h.id().0.clone()));
            }
        }
        Ok(Self { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one member
    }

    pub fn get(&self, index: usize) -> &Hypothesis {
        &self.members[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Hypothesis> {
        self.members.iter()
    }

    pub fn ids(&self) -> Vec<HypothesisId> {
        self.members.iter().map(|h| h.id().clone()).collect()
    }

    /// Index and member for an id, if present.
    pub fn by_id(&self, id: &HypothesisId) -> Option<(usize, &Hypothesis)> {
        self.members
            .iter()
            .enumerate()
            .find(|(_, h)| h.id() == id)
            .map(|(i, h)| (i, h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_hypotheses_default_to_empty_off_support() {
        let mut map = BTreeMap::new();
        map.insert(3, LabelSet::range(0, 4));
        let h = Hypothesis::table("h", map);
        assert_eq!(h.kind(), HypothesisKind::Extensional);
        assert_eq!(h.output_size(3), 5);
        assert!(h.eval(4).is_empty());
    }

    #[test]
    fn intensional_rules_are_pure() {
        let h = Hypothesis::intensional("block", |x| LabelSet::range(x * 10, x * 10 + 9));
        assert_eq!(h.kind(), HypothesisKind::Intensional);
        assert_eq!(h.eval(7), h.eval(7));
        assert_eq!(h.eval(2), LabelSet::range(20, 29));
    }

    #[test]
    fn class_rejects_duplicates_and_empty() {
        let a = Hypothesis::constant("a", LabelSet::singleton(1));
        let a2 = Hypothesis::constant("a", LabelSet::singleton(2));
        assert!(matches!(
            HypothesisClass::new(vec![a.clone(), a2]),
            Err(CoreError::DuplicateId(_))
        ));
        assert!(matches!(HypothesisClass::new(vec![]), Err(CoreError::EmptyClass)));
        let class = HypothesisClass::new(vec![a]).unwrap();
        assert_eq!(class.len(), 1);
        assert_eq!(class.by_id(&"a".into()).unwrap().0, 0);
        assert!(class.by_id(&"zzz".into()).is_none());
    }
}
