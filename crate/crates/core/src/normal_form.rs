//! Exact arithmetic in the fundamental group of a graph of finite groups.
//!
//! The group is built in layers following a [`ConstructionPlan`]: the base
//! layer is a finite vertex group, and every later layer is either an
//! amalgamated product `H ∗_A K` of the layer below with a finite vertex
//! group, or an HNN extension `⟨H, t | t a t⁻¹ = φ(a)⟩` of the layer below.
//!
//! Elements are stored in normal form relative to fixed right coset
//! representatives:
//!
//! * amalgam layer: `a c₁ ⋯ c_s` with `a ∈ A` and the `c_i` alternating
//!   between non-trivial representatives of `A` in `H` and in `K`;
//! * HNN layer: `h t^{ε₁} c₁ ⋯ t^{ε_s} c_s` with `c_i` a representative of
//!   `A` (`ε_i = +1`) or `B` (`ε_i = −1`) and no `t^ε 1 t^{−ε}`.
//!
//! A representative of a finite coset is its least-index member. A
//! representative of a coset in an infinite layer is its least member under
//! the total order on [`GroupElement`]. Since the identity is least in every
//! layer, the subgroup itself is always represented by the identity.
//!
//! Multiplication folds the right operand into the left one piece by piece,
//! pushing the edge-group part of each new piece leftwards through the
//! syllables and re-extracting representatives on the way.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::NormalFormError;
use crate::finite::FiniteGroup;
use crate::graph::{ConstructionPlan, GraphOfGroups, LetterDef, Sign, StepKind};
use crate::group::{GeneratingSet, Group};
use crate::words::{InvolutiveAlphabet, Word};

/// A group element in layered normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Finite(usize),
    Amalgam {
        edge: usize,
        syllables: Vec<Syllable>,
    },
    Hnn {
        head: Box<GroupElement>,
        syllables: Vec<(Sign, GroupElement)>,
    },
}

/// One factor of an amalgam normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syllable {
    /// A representative of `A` in the layer below.
    Lower(GroupElement),
    /// A representative of `A` in the finite factor, by element index.
    Factor(usize),
}

impl GroupElement {
    /// Number of alternating factors, or of stable-letter occurrences.
    pub fn syllable_length(&self) -> usize {
        match self {
            GroupElement::Finite(_) => 0,
            GroupElement::Amalgam { syllables, .. } => syllables.len(),
            GroupElement::Hnn { syllables, .. } => syllables.len(),
        }
    }

    /// Structural identity test; valid because normal forms are unique.
    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Finite(i) => *i == 0,
            GroupElement::Amalgam { edge, syllables } => *edge == 0 && syllables.is_empty(),
            GroupElement::Hnn { head, syllables } => syllables.is_empty() && head.is_identity(),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            GroupElement::Finite(_) => 0,
            GroupElement::Amalgam { .. } => 1,
            GroupElement::Hnn { .. } => 2,
        }
    }
}

impl Ord for GroupElement {
    /// Syllable length first, then components lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        use GroupElement::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (
                Amalgam {
                    edge: e1,
                    syllables: s1,
                },
                Amalgam {
                    edge: e2,
                    syllables: s2,
                },
            ) => s1
                .len()
                .cmp(&s2.len())
                .then_with(|| e1.cmp(e2))
                .then_with(|| s1.cmp(s2)),
            (
                Hnn {
                    head: h1,
                    syllables: s1,
                },
                Hnn {
                    head: h2,
                    syllables: s2,
                },
            ) => s1
                .len()
                .cmp(&s2.len())
                .then_with(|| h1.cmp(h2))
                .then_with(|| s1.cmp(s2)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug)]
struct AmalgamLayer {
    edge_group: Arc<FiniteGroup>,
    factor: Arc<FiniteGroup>,
    /// `α(x)` in the layer below, indexed by edge element.
    edge_in_lower: Vec<GroupElement>,
    /// `β(x)` in the factor.
    edge_in_factor: Vec<usize>,
    /// For each factor element `k`: `(x, r)` with `k = β(x)·r`.
    factor_split: Vec<(usize, usize)>,
}

#[derive(Debug)]
struct HnnLayer {
    /// `[A, B]` in the layer below, indexed by edge element: `A[x] = α(x)`,
    /// `B[x] = β(x)`, so that `t·A[x]·t⁻¹ = B[x]`.
    associated: [Vec<GroupElement>; 2],
}

#[derive(Debug)]
enum Layer {
    Amalgam(AmalgamLayer),
    Hnn(HnnLayer),
}

fn side(sign: Sign) -> usize {
    match sign {
        Sign::Pos => 0,
        Sign::Neg => 1,
    }
}

/// A piece of the right operand while folding into an amalgam form.
enum Piece {
    Lower(GroupElement),
    Factor(usize),
}

/// The fundamental group of a graph of finite groups, with the generating
/// set produced by its construction plan.
#[derive(Debug)]
pub struct ConstructedGroup {
    base: Arc<FiniteGroup>,
    layers: Vec<Layer>,
    generators: GeneratingSet<GroupElement>,
    /// Images of every vertex-group element in the top layer.
    vertex_images: Vec<Vec<GroupElement>>,
}

impl ConstructedGroup {
    pub fn new(graph: &GraphOfGroups, plan: &ConstructionPlan) -> Self {
        let StepKind::Base { vertex: base_vertex } = plan.steps[0].kind else {
            panic!("plan must start with a base step");
        };
        let base = graph.vertices[base_vertex].clone();
        let mut group = ConstructedGroup {
            base: base.clone(),
            layers: Vec::new(),
            generators: GeneratingSet::new(InvolutiveAlphabet::new::<&str>(&[]).expect("empty"), vec![]),
            vertex_images: Vec::new(),
        };
        let mut images: Vec<Option<Vec<GroupElement>>> = vec![None; graph.vertices.len()];
        images[base_vertex] = Some((0..base.order()).map(GroupElement::Finite).collect());
        // depth at which each HNN step's layer lives
        let mut step_depth = vec![0; plan.steps.len()];

        for (i, step) in plan.steps.iter().enumerate().skip(1) {
            let lower = group.layers.len();
            match step.kind {
                StepKind::Amalgamate { vertex, edge, from } => {
                    let e = &graph.edges[edge];
                    let s = if e.ends[0] == vertex { 0 } else { 1 };
                    let (alpha, beta) = (&e.maps[1 - s], &e.maps[s]);
                    let from_images = images[from].as_ref().expect("tree order");
                    let edge_in_lower = (0..e.group.order())
                        .map(|x| from_images[alpha.apply(x)].clone())
                        .collect();
                    let factor = graph.vertices[vertex].clone();
                    let edge_in_factor: Vec<usize> = (0..e.group.order()).map(|x| beta.apply(x)).collect();
                    let sub = beta.image();
                    let mut factor_split = vec![(0, 0); factor.order()];
                    for coset in factor.coset_partition(&sub).expect("validated embedding") {
                        let r = coset.representative;
                        for m in coset.members {
                            let a = factor.mul(m, factor.inverse(r));
                            let x = edge_in_factor.iter().position(|&b| b == a).expect("a ∈ β(E)");
                            factor_split[m] = (x, r);
                        }
                    }
                    group.layers.push(Layer::Amalgam(AmalgamLayer {
                        edge_group: e.group.clone(),
                        factor: factor.clone(),
                        edge_in_lower,
                        edge_in_factor,
                        factor_split,
                    }));
                    group.lift_all(&mut images, lower);
                    images[vertex] = Some(
                        (0..factor.order())
                            .map(|k| group.embed_factor(lower + 1, k))
                            .collect(),
                    );
                }
                StepKind::HnnExtend { edge, .. } => {
                    let e = &graph.edges[edge];
                    let [u, v] = e.ends;
                    let a_images = images[u].as_ref().expect("all vertices placed");
                    let b_images = images[v].as_ref().expect("all vertices placed");
                    let associated = [
                        (0..e.group.order()).map(|x| a_images[e.maps[0].apply(x)].clone()).collect(),
                        (0..e.group.order()).map(|x| b_images[e.maps[1].apply(x)].clone()).collect(),
                    ];
                    group.layers.push(Layer::Hnn(HnnLayer {
                        associated,
                    }));
                    group.lift_all(&mut images, lower);
                    step_depth[i] = lower + 1;
                }
                StepKind::Base { .. } => panic!("base step after the start"),
            }
        }

        let top = group.layers.len();
        group.vertex_images = images
            .into_iter()
            .map(|v| v.expect("every vertex placed"))
            .collect();
        let letter_images = plan
            .letters
            .iter()
            .map(|def| match *def {
                LetterDef::Vertex { vertex, element } => group.vertex_images[vertex][element].clone(),
                LetterDef::Stable {
                    step,
                    sign,
                    edge_element,
                } => {
                    let d = step_depth[step];
                    let Layer::Hnn(layer) = &group.layers[d - 1] else {
                        unreachable!("stable letters live on HNN layers")
                    };
                    let t = group.stable_letter(d, sign);
                    let x = group.lift(d - 1, layer.associated[side(sign)][edge_element].clone());
                    let e = group.mul_at(d, &t, &x);
                    group.lift_to(d, e, top)
                }
            })
            .collect();
        group.generators = GeneratingSet::new(plan.alphabet.clone(), letter_images);
        group
    }

    /// Depth of the top layer (0 for a single finite group).
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn generators(&self) -> &GeneratingSet<GroupElement> {
        &self.generators
    }

    pub fn alphabet(&self) -> &InvolutiveAlphabet {
        self.generators.alphabet()
    }

    /// Image of vertex-group element `element` of `vertex`.
    pub fn vertex_element(&self, vertex: usize, element: usize) -> &GroupElement {
        &self.vertex_images[vertex][element]
    }

    pub fn evaluate(&self, w: &Word) -> Result<GroupElement, NormalFormError> {
        self.alphabet().check(w)?;
        Ok(self.generators.evaluate(self, w))
    }

    pub fn evaluate_str(&self, text: &str) -> Result<GroupElement, NormalFormError> {
        let w = self.alphabet().parse(text)?;
        Ok(self.generators.evaluate(self, &w))
    }

    pub fn equal(&self, g1: &GroupElement, g2: &GroupElement) -> bool {
        g1 == g2
    }

    /// Multiply two top-layer elements, rejecting ill-formed operands.
    pub fn try_multiply(&self, g1: &GroupElement, g2: &GroupElement) -> Result<GroupElement, NormalFormError> {
        let top = self.depth();
        if self.check_normal_form(top, g1).is_err() || self.check_normal_form(top, g2).is_err() {
            return Err(NormalFormError::LayerMismatch);
        }
        Ok(self.mul_at(top, g1, g2))
    }

    /// `h = a·c` with `a` in `sub` and `c` the least element of `sub·h`.
    /// `sub` must be a finite subgroup of layer `depth`.
    pub fn canonical_coset_rep(
        &self,
        depth: usize,
        h: &GroupElement,
        sub: &[GroupElement],
    ) -> (GroupElement, GroupElement) {
        let (i, c) = self.coset_split(depth, h, sub);
        (sub[i].clone(), c)
    }

    fn identity_at(&self, depth: usize) -> GroupElement {
        if depth == 0 {
            return GroupElement::Finite(0);
        }
        match &self.layers[depth - 1] {
            Layer::Amalgam(_) => GroupElement::Amalgam {
                edge: 0,
                syllables: Vec::new(),
            },
            Layer::Hnn(_) => GroupElement::Hnn {
                head: Box::new(self.identity_at(depth - 1)),
                syllables: Vec::new(),
            },
        }
    }

    /// Index `i` and representative `c` with `h = sub[i]·c`.
    fn coset_split(&self, depth: usize, h: &GroupElement, sub: &[GroupElement]) -> (usize, GroupElement) {
        let mut best: Option<(usize, GroupElement)> = None;
        for (i, a) in sub.iter().enumerate() {
            let cand = self.mul_at(depth, &self.inv_at(depth, a), h);
            if best.as_ref().is_none_or(|(_, b)| cand < *b) {
                best = Some((i, cand));
            }
        }
        best.expect("subgroup contains the identity")
    }

    pub(crate) fn mul_at(&self, depth: usize, x: &GroupElement, y: &GroupElement) -> GroupElement {
        if depth == 0 {
            let (GroupElement::Finite(a), GroupElement::Finite(b)) = (x, y) else {
                panic!("layer mismatch at the base");
            };
            return GroupElement::Finite(self.base.mul(*a, *b));
        }
        match &self.layers[depth - 1] {
            Layer::Amalgam(layer) => {
                let (GroupElement::Amalgam { edge, syllables }, GroupElement::Amalgam { edge: e2, syllables: s2 }) = (x, y)
                else {
                    panic!("layer mismatch at depth {depth}");
                };
                let mut edge = *edge;
                let mut syl = syllables.clone();
                let n = syl.len();
                self.amalgam_absorb(depth, layer, &mut edge, &mut syl, n, *e2);
                for s in s2 {
                    let piece = match s {
                        Syllable::Lower(c) => Piece::Lower(c.clone()),
                        Syllable::Factor(k) => Piece::Factor(*k),
                    };
                    self.amalgam_push(depth, layer, &mut edge, &mut syl, piece);
                }
                GroupElement::Amalgam { edge, syllables: syl }
            }
            Layer::Hnn(layer) => {
                let (GroupElement::Hnn { head, syllables }, GroupElement::Hnn { head: h2, syllables: s2 }) = (x, y) else {
                    panic!("layer mismatch at depth {depth}");
                };
                let mut head = (**head).clone();
                let mut syl = syllables.clone();
                self.hnn_push_lower(depth, layer, &mut head, &mut syl, h2);
                for (sign, c) in s2 {
                    self.hnn_push_stable(depth, &mut syl, *sign);
                    self.hnn_push_lower(depth, layer, &mut head, &mut syl, c);
                }
                GroupElement::Hnn {
                    head: Box::new(head),
                    syllables: syl,
                }
            }
        }
    }

    pub(crate) fn inv_at(&self, depth: usize, x: &GroupElement) -> GroupElement {
        if depth == 0 {
            let GroupElement::Finite(a) = x else {
                panic!("layer mismatch at the base");
            };
            return GroupElement::Finite(self.base.inverse(*a));
        }
        match (&self.layers[depth - 1], x) {
            (Layer::Amalgam(layer), GroupElement::Amalgam { edge, syllables }) => {
                let mut e = 0;
                let mut syl = Vec::with_capacity(syllables.len());
                for s in syllables.iter().rev() {
                    let piece = match s {
                        Syllable::Lower(c) => Piece::Lower(self.inv_at(depth - 1, c)),
                        Syllable::Factor(k) => Piece::Factor(layer.factor.inverse(*k)),
                    };
                    self.amalgam_push(depth, layer, &mut e, &mut syl, piece);
                }
                let n = syl.len();
                self.amalgam_absorb(depth, layer, &mut e, &mut syl, n, layer.edge_group.inverse(*edge));
                GroupElement::Amalgam { edge: e, syllables: syl }
            }
            (Layer::Hnn(layer), GroupElement::Hnn { head, syllables }) => {
                let mut h = self.identity_at(depth - 1);
                let mut syl = Vec::with_capacity(syllables.len());
                for (sign, c) in syllables.iter().rev() {
                    let ci = self.inv_at(depth - 1, c);
                    self.hnn_push_lower(depth, layer, &mut h, &mut syl, &ci);
                    self.hnn_push_stable(depth, &mut syl, sign.flip());
                }
                let hi = self.inv_at(depth - 1, head);
                self.hnn_push_lower(depth, layer, &mut h, &mut syl, &hi);
                GroupElement::Hnn {
                    head: Box::new(h),
                    syllables: syl,
                }
            }
            _ => panic!("layer mismatch at depth {depth}"),
        }
    }

    /// Split an arbitrary element of one factor into its edge part and its
    /// representative (`None` when the representative is trivial).
    fn amalgam_split(&self, depth: usize, layer: &AmalgamLayer, piece: Piece) -> (usize, Option<Syllable>) {
        match piece {
            Piece::Factor(k) => {
                let (x, r) = layer.factor_split[k];
                (x, (r != 0).then_some(Syllable::Factor(r)))
            }
            Piece::Lower(h) => {
                let (x, c) = self.coset_split(depth - 1, &h, &layer.edge_in_lower);
                let rep = (!c.is_identity()).then_some(Syllable::Lower(c));
                (x, rep)
            }
        }
    }

    /// Right-multiply the form `(edge, syl)` by one piece.
    fn amalgam_push(&self, depth: usize, layer: &AmalgamLayer, edge: &mut usize, syl: &mut Vec<Syllable>, piece: Piece) {
        let same_side = matches!(
            (syl.last(), &piece),
            (Some(Syllable::Lower(_)), Piece::Lower(_)) | (Some(Syllable::Factor(_)), Piece::Factor(_))
        );
        let product = if same_side {
            match (syl.pop(), piece) {
                (Some(Syllable::Lower(c)), Piece::Lower(h)) => Piece::Lower(self.mul_at(depth - 1, &c, &h)),
                (Some(Syllable::Factor(c)), Piece::Factor(k)) => Piece::Factor(layer.factor.mul(c, k)),
                _ => unreachable!(),
            }
        } else {
            piece
        };
        let (x, rep) = self.amalgam_split(depth, layer, product);
        let upto = syl.len();
        if let Some(rep) = rep {
            syl.push(rep);
        }
        self.amalgam_absorb(depth, layer, edge, syl, upto, x);
    }

    /// Move edge element `x`, sitting just right of `syl[upto - 1]`, to the
    /// front of the form.
    fn amalgam_absorb(
        &self,
        depth: usize,
        layer: &AmalgamLayer,
        edge: &mut usize,
        syl: &mut [Syllable],
        upto: usize,
        mut x: usize,
    ) {
        for i in (0..upto).rev() {
            if x == 0 {
                return;
            }
            let piece = match &syl[i] {
                Syllable::Lower(c) => Piece::Lower(self.mul_at(depth - 1, c, &layer.edge_in_lower[x])),
                Syllable::Factor(k) => Piece::Factor(layer.factor.mul(*k, layer.edge_in_factor[x])),
            };
            let (x2, rep) = self.amalgam_split(depth, layer, piece);
            syl[i] = rep.expect("a representative outside A stays outside A");
            x = x2;
        }
        *edge = layer.edge_group.mul(*edge, x);
    }

    fn stable_letter(&self, depth: usize, sign: Sign) -> GroupElement {
        GroupElement::Hnn {
            head: Box::new(self.identity_at(depth - 1)),
            syllables: vec![(sign, self.identity_at(depth - 1))],
        }
    }

    fn hnn_push_stable(&self, depth: usize, syl: &mut Vec<(Sign, GroupElement)>, sign: Sign) {
        if let Some((s, c)) = syl.last() {
            if *s == sign.flip() && c.is_identity() {
                syl.pop();
                return;
            }
        }
        syl.push((sign, self.identity_at(depth - 1)));
    }

    fn hnn_push_lower(
        &self,
        depth: usize,
        layer: &HnnLayer,
        head: &mut GroupElement,
        syl: &mut Vec<(Sign, GroupElement)>,
        h: &GroupElement,
    ) {
        if h.is_identity() {
            return;
        }
        let Some((sign, c)) = syl.pop() else {
            *head = self.mul_at(depth - 1, head, h);
            return;
        };
        let y = self.mul_at(depth - 1, &c, h);
        let (x, rep) = self.coset_split(depth - 1, &y, &layer.associated[side(sign)]);
        let upto = syl.len();
        syl.push((sign, rep));
        // t·α(x) = β(x)·t and t⁻¹·β(x) = α(x)·t⁻¹
        let mut z_side = side(sign.flip());
        let mut x = x;
        for i in (0..upto).rev() {
            if x == 0 {
                return;
            }
            let z = &layer.associated[z_side][x];
            let (s_i, c_i) = &syl[i];
            let s_i = *s_i;
            let y = self.mul_at(depth - 1, c_i, z);
            let (x2, rep) = self.coset_split(depth - 1, &y, &layer.associated[side(s_i)]);
            syl[i].1 = rep;
            x = x2;
            z_side = side(s_i.flip());
        }
        if x != 0 {
            *head = self.mul_at(depth - 1, head, &layer.associated[z_side][x]);
        }
    }

    /// Embed an element of layer `depth - 1` into layer `depth`.
    fn lift(&self, lower: usize, h: GroupElement) -> GroupElement {
        match &self.layers[lower] {
            Layer::Amalgam(layer) => {
                let (x, c) = self.coset_split(lower, &h, &layer.edge_in_lower);
                GroupElement::Amalgam {
                    edge: x,
                    syllables: if c.is_identity() { vec![] } else { vec![Syllable::Lower(c)] },
                }
            }
            Layer::Hnn(_) => GroupElement::Hnn {
                head: Box::new(h),
                syllables: Vec::new(),
            },
        }
    }

    fn lift_to(&self, from: usize, mut e: GroupElement, to: usize) -> GroupElement {
        for d in from..to {
            e = self.lift(d, e);
        }
        e
    }

    fn lift_all(&self, images: &mut [Option<Vec<GroupElement>>], lower: usize) {
        for v in images.iter_mut().flatten() {
            for e in v.iter_mut() {
                *e = self.lift(lower, std::mem::replace(e, GroupElement::Finite(0)));
            }
        }
    }

    fn embed_factor(&self, depth: usize, k: usize) -> GroupElement {
        let Layer::Amalgam(layer) = &self.layers[depth - 1] else {
            unreachable!()
        };
        let (x, r) = layer.factor_split[k];
        GroupElement::Amalgam {
            edge: x,
            syllables: if r == 0 { vec![] } else { vec![Syllable::Factor(r)] },
        }
    }

    /// Structural scan: the element is a well-formed normal form of layer
    /// `depth` (alternation, canonical representatives, no pinches).
    pub fn check_normal_form(&self, depth: usize, e: &GroupElement) -> Result<(), String> {
        if depth == 0 {
            return match e {
                GroupElement::Finite(i) if *i < self.base.order() => Ok(()),
                _ => Err("not a base element".into()),
            };
        }
        let lower = depth - 1;
        match (&self.layers[lower], e) {
            (Layer::Amalgam(layer), GroupElement::Amalgam { edge, syllables }) => {
                if *edge >= layer.edge_group.order() {
                    return Err("edge element out of range".into());
                }
                for pair in syllables.windows(2) {
                    if matches!(
                        pair,
                        [Syllable::Lower(_), Syllable::Lower(_)] | [Syllable::Factor(_), Syllable::Factor(_)]
                    ) {
                        return Err("syllables do not alternate".into());
                    }
                }
                for s in syllables {
                    match s {
                        Syllable::Factor(k) => {
                            if *k >= layer.factor.order() || layer.factor_split[*k] != (0, *k) || *k == 0 {
                                return Err("factor syllable is not a non-trivial representative".into());
                            }
                        }
                        Syllable::Lower(c) => {
                            self.check_normal_form(lower, c)?;
                            let (x, rep) = self.coset_split(lower, c, &layer.edge_in_lower);
                            if x != 0 || rep != *c || c.is_identity() {
                                return Err("lower syllable is not a non-trivial representative".into());
                            }
                        }
                    }
                }
                Ok(())
            }
            (Layer::Hnn(layer), GroupElement::Hnn { head, syllables }) => {
                self.check_normal_form(lower, head)?;
                for (i, (sign, c)) in syllables.iter().enumerate() {
                    self.check_normal_form(lower, c)?;
                    let (x, rep) = self.coset_split(lower, c, &layer.associated[side(*sign)]);
                    if x != 0 || rep != *c {
                        return Err(format!("syllable {i} is not a coset representative"));
                    }
                    if c.is_identity() {
                        if let Some((next, _)) = syllables.get(i + 1) {
                            if *next != *sign {
                                return Err(format!("pinch t^ε 1 t^-ε at syllable {i}"));
                            }
                        }
                    }
                }
                Ok(())
            }
            _ => Err(format!("element does not belong to layer {depth}")),
        }
    }

    /// Nested bracketed rendering, stable across runs.
    pub fn render(&self, e: &GroupElement) -> String {
        let mut out = String::new();
        self.render_at(self.depth(), e, &mut out);
        out
    }

    fn render_at(&self, depth: usize, e: &GroupElement, out: &mut String) {
        match e {
            GroupElement::Finite(i) => out.push_str(self.base.name(*i)),
            GroupElement::Amalgam { edge, syllables } => {
                let Layer::Amalgam(layer) = &self.layers[depth - 1] else {
                    out.push('?');
                    return;
                };
                let _ = write!(out, "[{} |", layer.edge_group.name(*edge));
                for s in syllables {
                    out.push(' ');
                    match s {
                        Syllable::Lower(c) => {
                            out.push('(');
                            self.render_at(depth - 1, c, out);
                            out.push(')');
                        }
                        Syllable::Factor(k) => out.push_str(layer.factor.name(*k)),
                    }
                }
                out.push(']');
            }
            GroupElement::Hnn { head, syllables } => {
                out.push_str("[(");
                self.render_at(depth - 1, head, out);
                out.push_str(") |");
                for (sign, c) in syllables {
                    out.push_str(match sign {
                        Sign::Pos => " t+ (",
                        Sign::Neg => " t- (",
                    });
                    self.render_at(depth - 1, c, out);
                    out.push(')');
                }
                out.push(']');
            }
        }
    }
}

impl Group for ConstructedGroup {
    type Element = GroupElement;

    fn identity(&self) -> GroupElement {
        self.identity_at(self.depth())
    }

    fn multiply(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.mul_at(self.depth(), x, y)
    }

    fn invert(&self, x: &GroupElement) -> GroupElement {
        self.inv_at(self.depth(), x)
    }

    fn is_identity(&self, x: &GroupElement) -> bool {
        x.is_identity()
    }
}
