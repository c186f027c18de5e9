//! Length-reducing rewriting to geodesics, and the stack-based word problem.
//!
//! Rules come from the exclusion set at level `k`: one rule `u → v` per
//! minimal non-geodesic `u`, with `v` its ShortLex-least geodesic. When the
//! geodesics are `k`-locally excluding, rewriting until no left-hand side
//! occurs yields a geodesic.
//!
//! The word problem reads the input left to right and keeps a geodesic for
//! the prefix read so far on a stack. On each letter it pops at most
//! `2k − 2` letters, appends the new letter, reduces that window and pushes
//! it back. The window alone decides the new length, so each step costs a
//! bounded amount of work.

use std::borrow::Borrow;
use std::collections::HashMap;
use std::hash::Hash;

use crate::error::DehnError;
use crate::graph::ConstructionPlan;
use crate::group::Group;
use crate::oracle::{Ball, ExclusionSet, Oracle, Verification};
use crate::words::{InvolutiveAlphabet, Letter, Word};

impl Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        self.letters()
    }
}

/// `lhs → rhs` with `l(rhs) < l(lhs)` and `lhs = rhs` in the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: Word,
}

/// A finite length-reducing rule set, ordered by left-hand side (length,
/// then ShortLex).
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    rules: Vec<RewriteRule>,
    index: HashMap<Word, usize>,
    min_lhs: usize,
    max_lhs: usize,
}

impl RewriteSystem {
    pub fn new(mut rules: Vec<RewriteRule>) -> Self {
        rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
        let index = rules.iter().enumerate().map(|(i, r)| (r.lhs.clone(), i)).collect();
        let min_lhs = rules.iter().map(|r| r.lhs.len()).min().unwrap_or(0);
        let max_lhs = rules.iter().map(|r| r.lhs.len()).max().unwrap_or(0);
        RewriteSystem {
            rules,
            index,
            min_lhs,
            max_lhs,
        }
    }

    /// One rule per member of `f`, right-hand side read from the ball.
    pub fn synthesize<E, F>(f: &ExclusionSet, ball: &Ball<E>, evaluate: F) -> Self
    where
        E: Clone + Eq + Hash,
        F: Fn(&Word) -> E,
    {
        assert!(ball.radius() >= f.k, "ball must cover the exclusion level");
        let rules = f
            .forbidden
            .iter()
            .map(|u| RewriteRule {
                lhs: u.clone(),
                rhs: ball
                    .geodesic(&evaluate(u))
                    .expect("elements of length ≤ k lie in the ball")
                    .clone(),
            })
            .collect();
        Self::new(rules)
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn max_lhs(&self) -> usize {
        self.max_lhs
    }

    /// `lhs -> rhs` per line, in rule order.
    pub fn to_lines(&self, alphabet: &InvolutiveAlphabet) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&format!("{} -> {}\n", alphabet.display(&r.lhs), alphabet.display(&r.rhs)));
        }
        out
    }

    /// Leftmost rule match starting at or after `from`.
    fn find_match(&self, w: &[Letter], from: usize) -> Option<(usize, usize)> {
        if self.rules.is_empty() {
            return None;
        }
        for start in from..w.len() {
            for len in self.min_lhs..=self.max_lhs.min(w.len() - start) {
                if let Some(&i) = self.index.get(&w[start..start + len]) {
                    return Some((start, i));
                }
            }
        }
        None
    }

    /// Whether some left-hand side occurs in `w`.
    pub fn matches(&self, w: &Word) -> bool {
        self.find_match(w.letters(), 0).is_some()
    }

    /// Apply rules (leftmost match first) until none applies. Returns the
    /// result and the number of applications.
    pub fn rewrite_counting(&self, w: &Word) -> (Word, usize) {
        let mut letters = w.letters().to_vec();
        let mut from = 0;
        let mut applied = 0;
        while let Some((start, i)) = self.find_match(&letters, from) {
            let rule = &self.rules[i];
            letters.splice(start..start + rule.lhs.len(), rule.rhs.letters().iter().copied());
            applied += 1;
            from = start.saturating_sub(self.max_lhs - 1);
        }
        (Word::new(letters), applied)
    }

    pub fn rewrite(&self, w: &Word) -> Word {
        self.rewrite_counting(w).0
    }
}

/// Why the engine is allowed to trust local exclusion at its `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Guarantee {
    /// `k` is the construction plan's `k′` over the plan's generating set.
    ConstructionPlan,
    /// Exhaustively verified for all words up to `max_len`.
    Verified { max_len: usize },
}

/// Stack contents for the word problem; always a geodesic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeodesicStack {
    contents: Vec<Letter>,
}

impl GeodesicStack {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn word(&self) -> Word {
        Word::new(self.contents.clone())
    }

    pub fn len(&self) -> usize {
        self.contents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contents.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordProblemOutcome {
    pub is_identity: bool,
    /// Geodesic representative of the input.
    pub representative: Word,
    /// Largest number of rule applications in a single push.
    pub max_applications_per_push: usize,
}

impl WordProblemOutcome {
    pub fn length(&self) -> usize {
        self.representative.len()
    }
}

/// Dehn rewriting and the stack word problem at a fixed `k`.
#[derive(Clone, Debug)]
pub struct DehnEngine {
    rules: RewriteSystem,
    k: usize,
    guarantee: Guarantee,
    paranoid: bool,
}

impl DehnEngine {
    /// Engine at the plan's `k′`; the oracle must run over the plan's
    /// generating set.
    pub fn for_plan<G: Group>(plan: &ConstructionPlan, oracle: &mut Oracle<'_, G>) -> Result<Self, DehnError> {
        if oracle.alphabet() != &plan.alphabet {
            return Err(DehnError::PlanMismatch);
        }
        Self::build(oracle, plan.final_k(), Guarantee::ConstructionPlan)
    }

    /// Engine at an arbitrary `k`, accepted only if exhaustive verification
    /// up to `max_len` finds no counterexample.
    pub fn verified<G: Group>(oracle: &mut Oracle<'_, G>, k: usize, max_len: usize) -> Result<Self, DehnError> {
        if k < 2 {
            return Err(DehnError::BadLocality(k));
        }
        match oracle.verify(k, max_len)? {
            Verification::Ok { .. } => Self::build(oracle, k, Guarantee::Verified { max_len }),
            Verification::Counterexample(w) => {
                Err(DehnError::Unverified(oracle.alphabet().display(&w).to_string()))
            }
        }
    }

    fn build<G: Group>(oracle: &mut Oracle<'_, G>, k: usize, guarantee: Guarantee) -> Result<Self, DehnError> {
        if k < 2 {
            return Err(DehnError::BadLocality(k));
        }
        let f = oracle.build_exclusion_set(k)?;
        let rules = RewriteSystem::synthesize(&f, oracle.ball(), |w| oracle.evaluate(w));
        Ok(DehnEngine {
            rules,
            k,
            guarantee,
            paranoid: false,
        })
    }

    /// Re-check the whole stack for forbidden factors after every push.
    pub fn paranoid(mut self, on: bool) -> Self {
        self.paranoid = on;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pop_depth(&self) -> usize {
        2 * self.k - 2
    }

    pub fn guarantee(&self) -> &Guarantee {
        &self.guarantee
    }

    pub fn rules(&self) -> &RewriteSystem {
        &self.rules
    }

    pub fn rewrite_to_geodesic(&self, w: &Word) -> Word {
        self.rules.rewrite(w)
    }

    /// Read one letter. Returns the number of rule applications used.
    pub fn push_letter(&self, stack: &mut GeodesicStack, x: Letter) -> Result<usize, DehnError> {
        let keep = stack.contents.len().saturating_sub(self.pop_depth());
        let mut window: Vec<Letter> = stack.contents.split_off(keep);
        window.push(x);
        let (reduced, applied) = self.rules.rewrite_counting(&Word::new(window));
        stack.contents.extend(reduced.into_letters());
        if self.paranoid {
            let w = stack.word();
            if self.rules.matches(&w) {
                return Err(DehnError::StackInvariant(format!("{:?}", w.letters())));
            }
        }
        Ok(applied)
    }

    pub fn word_problem(&self, w: &Word) -> Result<WordProblemOutcome, DehnError> {
        let mut stack = GeodesicStack::new();
        let mut max_applied = 0;
        for &x in w.letters() {
            max_applied = max_applied.max(self.push_letter(&mut stack, x)?);
        }
        Ok(WordProblemOutcome {
            is_identity: stack.is_empty(),
            representative: stack.word(),
            max_applications_per_push: max_applied,
        })
    }
}
