#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vfree_core::graph::{LetterDef, Sign, StepKind};
use vfree_core::{ConstructedGroup, ConstructionPlan, GraphOfGroups, Letter, Word};

pub struct Built {
    pub graph: GraphOfGroups,
    pub plan: ConstructionPlan,
    pub group: ConstructedGroup,
}

pub fn build(name: &str) -> Built {
    let graph = vfree_core::fixtures::load(name);
    let plan = graph.plan().expect("fixture plans");
    let group = ConstructedGroup::new(&graph, &plan);
    Built { graph, plan, group }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word(b: &Built, rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    b.plan.alphabet.random_word(rng, len)
}

fn word(letters: &[Option<usize>]) -> Word {
    Word::new(letters.iter().flatten().map(|&i| Letter(i as u32)).collect())
}

/// Defining relators over the final generating set, read straight from the
/// input tables and the plan's letter definitions rather than from the
/// normal-form code.
pub fn relators(b: &Built) -> Vec<Word> {
    let plan = &b.plan;
    let al = &plan.alphabet;
    let mut out = Vec::new();
    for x in al.letters() {
        out.push(Word::new(vec![x, al.inv(x)]));
    }
    for (v, g) in b.graph.vertices.iter().enumerate() {
        let names = &plan.vertex_letters[v];
        for p in 1..g.order() {
            for q in 1..g.order() {
                let r = g.inverse(g.mul(p, q));
                out.push(word(&[names[p], names[q], names[r]]));
            }
        }
    }
    let stable = |step: usize, sign: Sign, x: usize| {
        plan.letters.iter().position(|d| {
            *d == LetterDef::Stable {
                step,
                sign,
                edge_element: x,
            }
        })
    };
    for (i, step) in plan.steps.iter().enumerate() {
        let StepKind::HnnExtend { edge, .. } = step.kind else {
            continue;
        };
        let e = &b.graph.edges[edge];
        let [u, v] = e.ends;
        let t = stable(i, Sign::Pos, 0);
        let t_inv = stable(i, Sign::Neg, 0);
        for x in 0..e.group.order() {
            let a = plan.vertex_letters[u][e.maps[0].apply(x)];
            let b_letter = plan.vertex_letters[v][e.maps[1].apply(x)];
            let b_inv = plan.vertex_letters[v][e.maps[1].apply(e.group.inverse(x))];
            // t·α(x)·t⁻¹·β(x)⁻¹
            out.push(word(&[t, a, t_inv, b_inv]));
            if x != 0 {
                // (t·α(x))⁻¹ · t · α(x), and the same on the other side
                let ta = stable(i, Sign::Pos, x).expect("letter t·α(x)");
                out.push(word(&[Some(al.inv(Letter(ta as u32)).index()), t, a]));
                let tb = stable(i, Sign::Neg, x).expect("letter t⁻¹·β(x)");
                out.push(word(&[Some(al.inv(Letter(tb as u32)).index()), t_inv, b_letter]));
            }
        }
    }
    out.retain(|w| !w.is_empty());
    out
}

/// `u` with `steps` random relator insertions (or inverted relators) and
/// random free insertions/cancellations.
pub fn perturb(b: &Built, rels: &[Word], rng: &mut ChaCha8Rng, u: &Word, steps: usize) -> Word {
    let al = &b.plan.alphabet;
    let mut w: Vec<Letter> = u.letters().to_vec();
    for _ in 0..steps {
        match rng.gen_range(0..3) {
            0 => {
                let r = &rels[rng.gen_range(0..rels.len())];
                let r = if rng.gen_bool(0.5) { al.formal_inverse(r) } else { r.clone() };
                // cyclic conjugate of a relator is a relator
                let n = r.len();
                let shift = rng.gen_range(0..n);
                let at = rng.gen_range(0..=w.len());
                let rot: Vec<Letter> = (0..n).map(|i| r.letters()[(i + shift) % n]).collect();
                w.splice(at..at, rot);
            }
            1 => {
                if let Some(i) = (0..w.len().saturating_sub(1))
                    .find(|&i| al.inv(w[i]) == w[i + 1])
                {
                    w.drain(i..i + 2);
                }
            }
            _ => {
                if let Some(x) = al.letters().nth(rng.gen_range(0..al.len())) {
                    let at = rng.gen_range(0..=w.len());
                    w.splice(at..at, [x, al.inv(x)]);
                }
            }
        }
    }
    Word::new(w)
}
