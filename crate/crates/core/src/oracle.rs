//! Brute-force ground truth for geodesics.
//!
//! A [`Ball`] is grown by breadth-first search from the identity over right
//! multiplication by the generators. Elements are expanded in first-visit
//! order and generators in alphabet order, so the word recorded for each
//! element is its ShortLex-least geodesic. Everything else here (exclusion
//! sets, exhaustive local-exclusion checks, minimal `k`) is read off the
//! ball.

use std::collections::{BTreeSet, HashMap};

use crate::error::OracleError;
use crate::group::{GeneratingSet, Group};
use crate::words::{InvolutiveAlphabet, Word};

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Elements of word length at most `radius`, with their geodesic length and
/// ShortLex-least geodesic.
#[derive(Clone, Debug)]
pub struct Ball<E> {
    radius: usize,
    table: HashMap<E, (usize, Word)>,
    levels: Vec<Vec<E>>,
}

impl<E: Clone + Eq + std::hash::Hash> Ball<E> {
    fn new(identity: E) -> Self {
        let mut table = HashMap::new();
        table.insert(identity.clone(), (0, Word::empty()));
        Ball {
            radius: 0,
            table,
            levels: vec![vec![identity]],
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Number of elements at each length `0..=radius`.
    pub fn growth(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn get(&self, e: &E) -> Option<&(usize, Word)> {
        self.table.get(e)
    }

    pub fn length(&self, e: &E) -> Option<usize> {
        self.table.get(e).map(|(l, _)| *l)
    }

    pub fn geodesic(&self, e: &E) -> Option<&Word> {
        self.table.get(e).map(|(_, w)| w)
    }

    /// Elements of length exactly `n`, in first-visit order.
    pub fn level(&self, n: usize) -> &[E] {
        &self.levels[n]
    }
}

/// Forbidden factors: the minimal non-geodesic words of length at most `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionSet {
    pub k: usize,
    pub forbidden: BTreeSet<Word>,
}

impl ExclusionSet {
    pub fn len(&self) -> usize {
        self.forbidden.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forbidden.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.forbidden.contains(w)
    }

    /// Whether some suffix of `w` of length `1..=k` is forbidden.
    pub fn forbids_suffix(&self, w: &Word) -> bool {
        let n = w.len();
        (1..=self.k.min(n)).any(|len| self.forbidden.contains(&w.factor(n - len, len)))
    }

    /// Whether `w` contains a forbidden factor.
    pub fn forbids(&self, w: &Word) -> bool {
        let n = w.len();
        (1..=self.k.min(n)).any(|len| (0..=n - len).any(|s| self.forbidden.contains(&w.factor(s, len))))
    }

    /// One word per line, ShortLex order.
    pub fn to_lines(&self, alphabet: &InvolutiveAlphabet) -> String {
        let mut out = String::new();
        for w in &self.forbidden {
            out.push_str(&alphabet.display(w).to_string());
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    /// Every word of length at most `max_len` avoiding `F(k)` is geodesic.
    Ok { words_checked: usize },
    /// The ShortLex-least word avoiding `F(k)` that is not geodesic.
    Counterexample(Word),
}

impl Verification {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verification::Ok { .. })
    }
}

/// Violation counts for the three parts of the suffix-reduction lemma.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuffixLemmaReport {
    pub pairs_checked: usize,
    /// `l_G(wx) ∈ {l(w) − 1, l(w), l(w) + 1}`.
    pub part_i: usize,
    /// `wx` geodesic ⇔ `vx` geodesic, `v` the suffix of length `k − 1`.
    pub part_ii: usize,
    /// `l_G(wx) − l(w) = l_G(v′x) − l(v′)`, `v′` the suffix of length `2k − 2`.
    pub part_iii: usize,
    pub first_violation: Option<(Word, usize)>,
}

impl SuffixLemmaReport {
    pub fn violations(&self) -> usize {
        self.part_i + self.part_ii + self.part_iii
    }
}

/// Geodesic oracle over a group and generating set.
pub struct Oracle<'a, G: Group> {
    group: &'a G,
    gens: &'a GeneratingSet<G::Element>,
    budget: usize,
    ball: Ball<G::Element>,
}

impl<'a, G: Group> Oracle<'a, G> {
    pub fn new(group: &'a G, gens: &'a GeneratingSet<G::Element>) -> Self {
        Self::with_budget(group, gens, DEFAULT_BUDGET)
    }

    pub fn with_budget(group: &'a G, gens: &'a GeneratingSet<G::Element>, budget: usize) -> Self {
        Oracle {
            group,
            gens,
            budget,
            ball: Ball::new(group.identity()),
        }
    }

    pub fn group(&self) -> &'a G {
        self.group
    }

    pub fn generators(&self) -> &'a GeneratingSet<G::Element> {
        self.gens
    }

    pub fn alphabet(&self) -> &'a InvolutiveAlphabet {
        self.gens.alphabet()
    }

    pub fn ball(&self) -> &Ball<G::Element> {
        &self.ball
    }

    pub fn evaluate(&self, w: &Word) -> G::Element {
        self.gens.evaluate(self.group, w)
    }

    /// Grow the ball to at least `radius`. Fails once the ball would hold
    /// more than the budget allows.
    pub fn grow_ball(&mut self, radius: usize) -> Result<&Ball<G::Element>, OracleError> {
        while self.ball.radius < radius {
            let r = self.ball.radius + 1;
            let mut next = Vec::new();
            for e in &self.ball.levels[r - 1] {
                let word = self.ball.table[e].1.clone();
                for x in self.gens.alphabet().letters() {
                    let ex = self.group.multiply(e, self.gens.image(x));
                    if self.ball.table.contains_key(&ex) {
                        continue;
                    }
                    if self.ball.table.len() >= self.budget {
                        return Err(OracleError::BudgetExceeded {
                            budget: self.budget,
                            radius: r,
                        });
                    }
                    let mut w = word.clone();
                    w.push(x);
                    self.ball.table.insert(ex.clone(), (r, w));
                    next.push(ex);
                }
            }
            self.ball.levels.push(next);
            self.ball.radius = r;
        }
        Ok(&self.ball)
    }

    /// Geodesic length of `e`, growing the ball until `e` appears or the
    /// radius reaches `bound`.
    pub fn element_length(&mut self, e: &G::Element, bound: usize) -> Result<Option<usize>, OracleError> {
        loop {
            if let Some(l) = self.ball.length(e) {
                return Ok(Some(l));
            }
            if self.ball.radius >= bound {
                return Ok(None);
            }
            let r = self.ball.radius + 1;
            self.grow_ball(r)?;
        }
    }

    /// `l_G(w)`.
    pub fn geodesic_length(&mut self, w: &Word) -> Result<usize, OracleError> {
        let e = self.evaluate(w);
        Ok(self
            .element_length(&e, w.len())?
            .expect("an element of word length n lies in the radius-n ball"))
    }

    pub fn is_geodesic(&mut self, w: &Word) -> Result<bool, OracleError> {
        Ok(self.geodesic_length(w)? == w.len())
    }

    /// Every factor of length at most `k` is geodesic. Factors of geodesics
    /// are geodesic, so only the factors of length `min(k, l(w))` are tested.
    pub fn is_k_local_geodesic(&mut self, w: &Word, k: usize) -> Result<bool, OracleError> {
        if k == 0 {
            return Err(OracleError::BadLocality);
        }
        let len = k.min(w.len());
        if len == 0 {
            return Ok(true);
        }
        self.grow_ball(len)?;
        for s in 0..=w.len() - len {
            if !self.is_geodesic(&w.factor(s, len))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All geodesic words of length at most `max_len` with their elements,
    /// in ShortLex order.
    pub fn geodesic_words(&mut self, max_len: usize) -> Result<Vec<(Word, G::Element)>, OracleError> {
        self.grow_ball(max_len)?;
        let mut out = vec![(Word::empty(), self.group.identity())];
        let mut level_start = 0;
        for n in 1..=max_len {
            let level_end = out.len();
            for i in level_start..level_end {
                for x in self.gens.alphabet().letters() {
                    let e = self.group.multiply(&out[i].1, self.gens.image(x));
                    if self.ball.length(&e) == Some(n) {
                        let mut w = out[i].0.clone();
                        w.push(x);
                        out.push((w, e));
                    }
                }
            }
            level_start = level_end;
        }
        Ok(out)
    }

    /// Minimal non-geodesic words of length at most `k`: non-geodesic, with
    /// every proper factor geodesic.
    pub fn build_exclusion_set(&mut self, k: usize) -> Result<ExclusionSet, OracleError> {
        if k == 0 {
            return Err(OracleError::BadLocality);
        }
        let geodesics = self.geodesic_words(k - 1)?;
        self.grow_ball(k)?;
        let mut forbidden = BTreeSet::new();
        for (p, e) in &geodesics {
            for x in self.gens.alphabet().letters() {
                let n = p.len() + 1;
                let ex = self.group.multiply(e, self.gens.image(x));
                if self.ball.length(&ex) == Some(n) {
                    continue;
                }
                let mut u = p.clone();
                u.push(x);
                // p is geodesic; the other maximal proper factor is u minus its first letter
                let tail = u.factor(1, n - 1);
                if self.ball.length(&self.evaluate(&tail)) == Some(n - 1) {
                    forbidden.insert(u);
                }
            }
        }
        Ok(ExclusionSet { k, forbidden })
    }

    /// Every non-geodesic word of length at most `k` (the unrestricted set).
    pub fn all_non_geodesics(&mut self, k: usize) -> Result<BTreeSet<Word>, OracleError> {
        self.grow_ball(k)?;
        let mut out = BTreeSet::new();
        let mut level = vec![(Word::empty(), self.group.identity())];
        for n in 1..=k {
            let mut next = Vec::new();
            for (w, e) in &level {
                for x in self.gens.alphabet().letters() {
                    let ex = self.group.multiply(e, self.gens.image(x));
                    let mut wx = w.clone();
                    wx.push(x);
                    if self.ball.length(&ex) != Some(n) {
                        out.insert(wx.clone());
                    }
                    next.push((wx, ex));
                }
            }
            level = next;
        }
        Ok(out)
    }

    /// Exhaustively check that every word of length at most `max_len`
    /// avoiding `F(k)` is geodesic.
    pub fn verify(&mut self, k: usize, max_len: usize) -> Result<Verification, OracleError> {
        let f = self.build_exclusion_set(k)?;
        self.verify_against(&f, max_len)
    }

    pub fn verify_against(&mut self, f: &ExclusionSet, max_len: usize) -> Result<Verification, OracleError> {
        self.grow_ball(max_len)?;
        let mut level = vec![(Word::empty(), self.group.identity())];
        let mut checked = 0;
        for n in 1..=max_len {
            let mut next = Vec::new();
            for (w, e) in &level {
                for x in self.gens.alphabet().letters() {
                    let mut wx = w.clone();
                    wx.push(x);
                    if f.forbids_suffix(&wx) {
                        continue;
                    }
                    checked += 1;
                    let ex = self.group.multiply(e, self.gens.image(x));
                    if self.ball.length(&ex) != Some(n) {
                        return Ok(Verification::Counterexample(wx));
                    }
                    next.push((wx, ex));
                }
            }
            level = next;
        }
        Ok(Verification::Ok { words_checked: checked })
    }

    /// Least `k ≤ max_len` for which [`Oracle::verify`] succeeds up to
    /// `max_len`.
    pub fn minimal_k(&mut self, max_len: usize) -> Result<Option<usize>, OracleError> {
        for k in 1..=max_len {
            if self.verify(k, max_len)?.is_ok() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Check the three parts of the suffix-reduction lemma for every
    /// geodesic `w` of length at most `radius` and every generator `x`.
    pub fn check_suffix_lemma(&mut self, k: usize, radius: usize) -> Result<SuffixLemmaReport, OracleError> {
        if k == 0 {
            return Err(OracleError::BadLocality);
        }
        let geodesics = self.geodesic_words(radius)?;
        self.grow_ball(radius + 1)?;
        let mut report = SuffixLemmaReport::default();
        for (w, e) in &geodesics {
            let l = w.len() as i64;
            for x in self.gens.alphabet().letters() {
                report.pairs_checked += 1;
                let lwx = self.ball.length(&self.group.multiply(e, self.gens.image(x))).expect("in ball") as i64;
                let mut bad = false;
                if (lwx - l).abs() > 1 {
                    report.part_i += 1;
                    bad = true;
                }
                let mut vx = w.suffix(k - 1);
                vx.push(x);
                let vx_geodesic = self.ball.length(&self.evaluate(&vx)) == Some(vx.len());
                if (lwx == l + 1) != vx_geodesic {
                    report.part_ii += 1;
                    bad = true;
                }
                let v2 = w.suffix(2 * k - 2);
                let mut v2x = v2.clone();
                v2x.push(x);
                let lv2x = self.ball.length(&self.evaluate(&v2x)).expect("in ball") as i64;
                if lwx - l != lv2x - v2.len() as i64 {
                    report.part_iii += 1;
                    bad = true;
                }
                if bad && report.first_violation.is_none() {
                    report.first_violation = Some((w.clone(), x.index()));
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::normal_form::ConstructedGroup;

    fn build(name: &str) -> ConstructedGroup {
        let g = fixtures::load(name);
        let plan = g.plan().unwrap();
        ConstructedGroup::new(&g, &plan)
    }

    fn lines(o: &Oracle<'_, ConstructedGroup>, f: &ExclusionSet) -> Vec<String> {
        f.forbidden.iter().map(|w| o.alphabet().display(w).to_string()).collect()
    }

    #[test]
    fn ball_growth_dinfinity() {
        let g = build("c2_c2");
        let mut o = Oracle::new(&g, g.generators());
        assert_eq!(o.grow_ball(0).unwrap().growth(), [1]);
        let ball = o.grow_ball(3).unwrap();
        assert_eq!(ball.growth(), [1, 2, 2, 2]);
        let al = g.alphabet();
        let words: Vec<String> = (0..=3)
            .flat_map(|n| ball.level(n).iter().map(|e| al.display(ball.geodesic(e).unwrap()).to_string()))
            .collect();
        assert_eq!(words, ["", "a", "b", "a b", "b a", "a b a", "b a b"]);
    }

    #[test]
    fn ball_growth_modular_group() {
        let g = build("c2_c3");
        let mut o = Oracle::new(&g, g.generators());
        assert_eq!(o.grow_ball(2).unwrap().growth(), [1, 3, 4]);
    }

    #[test]
    fn ball_records_consistent_geodesics() {
        let g = build("c4_c2_c4");
        let mut o = Oracle::new(&g, g.generators());
        o.grow_ball(5).unwrap();
        let ball = o.ball().clone();
        for n in 0..=5 {
            for e in ball.level(n) {
                let (l, w) = ball.get(e).unwrap();
                assert_eq!(*l, n);
                assert_eq!(w.len(), n);
                assert_eq!(&o.evaluate(w), e);
                for x in g.alphabet().letters() {
                    if let Some(l2) = ball.length(&g.multiply(e, g.generators().image(x))) {
                        assert!(l2.abs_diff(n) <= 1);
                    }
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = build("c2_c3");
        let mut o = Oracle::with_budget(&g, g.generators(), 10);
        assert!(matches!(o.grow_ball(10), Err(OracleError::BudgetExceeded { budget: 10, .. })));
    }

    #[test]
    fn geodesic_lengths() {
        let g = build("c2_c2");
        let mut o = Oracle::new(&g, g.generators());
        let al = g.alphabet();
        assert_eq!(o.geodesic_length(&Word::empty()).unwrap(), 0);
        assert_eq!(o.geodesic_length(&al.parse("a a").unwrap()).unwrap(), 0);
        assert_eq!(o.geodesic_length(&al.parse("a b a b b a").unwrap()).unwrap(), 2);
    }

    #[test]
    fn local_geodesics() {
        let g = build("c2_c2");
        let mut o = Oracle::new(&g, g.generators());
        let al = g.alphabet();
        assert!(o.is_k_local_geodesic(&al.parse("a b a b").unwrap(), 2).unwrap());
        assert!(!o.is_k_local_geodesic(&al.parse("a b b a").unwrap(), 2).unwrap());
        assert!(o.is_k_local_geodesic(&Word::empty(), 5).unwrap());
    }

    #[test]
    fn exclusion_sets() {
        let g = build("c2_c2");
        let mut o = Oracle::new(&g, g.generators());
        let f = o.build_exclusion_set(2).unwrap();
        assert_eq!(lines(&o, &f), ["a a", "b b"]);

        let g = build("c2_c3");
        let mut o = Oracle::new(&g, g.generators());
        let f = o.build_exclusion_set(2).unwrap();
        assert_eq!(lines(&o, &f), ["a a", "b b", "b B", "B b", "B B"]);

        let g = build("z");
        let mut o = Oracle::new(&g, g.generators());
        let f = o.build_exclusion_set(2).unwrap();
        assert_eq!(lines(&o, &f), ["t1 t1^-1", "t1^-1 t1"]);
    }

    #[test]
    fn verification_examples() {
        let g = build("c2_c2");
        let mut o = Oracle::new(&g, g.generators());
        assert!(o.verify(2, 8).unwrap().is_ok());
        assert_eq!(o.minimal_k(8).unwrap(), Some(2));

        let g = build("c2_c3");
        let mut o = Oracle::new(&g, g.generators());
        assert_eq!(o.minimal_k(8).unwrap(), Some(2));
    }

    #[test]
    fn hnn_without_composite_letters_fails() {
        let g = build("c2_hnn");
        let small = g.generators().restrict(&["a", "t1", "t1^-1"]).unwrap();
        let mut o = Oracle::new(&g, &small);
        let al = small.alphabet();
        let w = al.parse("t1 a t1^-1").unwrap();
        assert!(o.is_k_local_geodesic(&w, 2).unwrap());
        assert_eq!(o.geodesic_length(&w).unwrap(), 1);
        let Verification::Counterexample(c) = o.verify(2, 8).unwrap() else {
            panic!("expected a counterexample");
        };
        assert_eq!(al.display(&c).to_string(), "a t1 a");
    }

    #[test]
    fn vacuous_when_k_covers_length() {
        let g = build("c2_hnn");
        let small = g.generators().restrict(&["a", "t1", "t1^-1"]).unwrap();
        let mut o = Oracle::new(&g, &small);
        assert!(o.verify(5, 5).unwrap().is_ok());
    }

    #[test]
    fn minimal_set_equivalent_to_full_set() {
        for name in ["c2_c3", "c4_c2_c4", "c2_hnn"] {
            let g = build(name);
            let mut o = Oracle::new(&g, g.generators());
            let k = 3;
            let minimal = o.build_exclusion_set(k).unwrap();
            let full = ExclusionSet {
                k,
                forbidden: o.all_non_geodesics(k).unwrap(),
            };
            assert!(minimal.forbidden.is_subset(&full.forbidden));
            // avoidance agrees on every word up to length 6
            let mut level = vec![Word::empty()];
            for _ in 0..6 {
                let mut next = Vec::new();
                for w in &level {
                    for x in g.alphabet().letters() {
                        let mut wx = w.clone();
                        wx.push(x);
                        assert_eq!(minimal.forbids(&wx), full.forbids(&wx), "{name}");
                        next.push(wx);
                    }
                }
                level = next;
            }
        }
    }
}
