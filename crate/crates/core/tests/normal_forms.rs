mod common;

use common::{build, perturb, random_word, relators, rng};
use vfree_core::fixtures::NAMES;
use vfree_core::{Group, GroupElement};

const ALL: [&str; 6] = ["c2_c2", "c2_c3", "c4_c2_c4", "c2_hnn", "z", "triangle"];

#[test]
fn relators_evaluate_to_identity() {
    for name in ALL {
        let b = build(name);
        for r in relators(&b) {
            let e = b.group.evaluate(&r).unwrap();
            assert!(
                e.is_identity(),
                "{name}: relator {} evaluates to {}",
                b.plan.alphabet.display(&r),
                b.group.render(&e)
            );
        }
    }
}

#[test]
fn uniqueness_under_relator_moves() {
    let mut pairs = 0;
    for (i, name) in ALL.iter().enumerate() {
        let b = build(name);
        let rels = relators(&b);
        let mut r = rng(100 + i as u64);
        for _ in 0..2000 {
            let u = random_word(&b, &mut r, 20);
            let v = perturb(&b, &rels, &mut r, &u, 6);
            let (eu, ev) = (b.group.evaluate(&u).unwrap(), b.group.evaluate(&v).unwrap());
            assert_eq!(
                eu,
                ev,
                "{name}: {} vs {}",
                b.plan.alphabet.display(&u),
                b.plan.alphabet.display(&v)
            );
            assert_eq!(eu.syllable_length(), ev.syllable_length());
            pairs += 1;
        }
    }
    assert!(pairs >= 10_000);
}

fn sample(name: &str, seed: u64, n: usize) -> (common::Built, Vec<GroupElement>) {
    let b = build(name);
    let mut r = rng(seed);
    let elems = (0..n)
        .map(|_| b.group.evaluate(&random_word(&b, &mut r, 15)).unwrap())
        .collect();
    (b, elems)
}

#[test]
fn associativity() {
    for name in ALL {
        let (b, e) = sample(name, 7, 600);
        let g = &b.group;
        for t in 0..1000 {
            let (x, y, z) = (&e[t % 600], &e[(t * 7 + 1) % 600], &e[(t * 13 + 5) % 600]);
            let left = g.try_multiply(&g.try_multiply(x, y).unwrap(), z).unwrap();
            let right = g.try_multiply(x, &g.try_multiply(y, z).unwrap()).unwrap();
            assert_eq!(left, right, "{name}");
        }
    }
}

#[test]
fn identity_and_inverses() {
    for name in ALL {
        let (b, e) = sample(name, 11, 1000);
        let g = &b.group;
        let one = g.identity();
        for x in &e {
            assert_eq!(&g.multiply(x, &one), x);
            assert_eq!(&g.multiply(&one, x), x);
            let xi = g.invert(x);
            assert!(g.multiply(x, &xi).is_identity(), "{name}");
            assert!(g.multiply(&xi, x).is_identity(), "{name}");
            assert_eq!(&g.invert(&xi), x);
        }
    }
}

#[test]
fn products_stay_in_normal_form() {
    for name in ALL {
        let (b, e) = sample(name, 13, 300);
        let g = &b.group;
        for pair in e.windows(2) {
            let p = g.multiply(&pair[0], &pair[1]);
            g.check_normal_form(g.depth(), &p)
                .unwrap_or_else(|m| panic!("{name}: {} : {m}", g.render(&p)));
        }
    }
}

#[test]
fn word_evaluation_matches_prefix_products() {
    // evaluate(uv) = evaluate(u)·evaluate(v)
    for name in NAMES {
        let b = build(name);
        let mut r = rng(17);
        for _ in 0..500 {
            let u = random_word(&b, &mut r, 12);
            let v = random_word(&b, &mut r, 12);
            let lhs = b.group.evaluate(&u.concat(&v)).unwrap();
            let rhs = b
                .group
                .multiply(&b.group.evaluate(&u).unwrap(), &b.group.evaluate(&v).unwrap());
            assert_eq!(lhs, rhs, "{name}");
        }
    }
}

#[test]
fn formal_inverse_evaluates_to_inverse() {
    for name in NAMES {
        let b = build(name);
        let al = &b.plan.alphabet;
        let mut r = rng(19);
        for _ in 0..500 {
            let u = random_word(&b, &mut r, 20);
            let e = b.group.evaluate(&u).unwrap();
            let ei = b.group.evaluate(&al.formal_inverse(&u)).unwrap();
            assert_eq!(b.group.invert(&e), ei, "{name}");
        }
    }
}

#[test]
fn infinite_order_elements_have_growing_syllables() {
    // In C2∗C2, (ab)^n has syllable length 2n.
    let b = build("c2_c2");
    let ab = b.group.evaluate_str("a b").unwrap();
    let mut p = b.group.identity();
    for n in 1..=10 {
        p = b.group.multiply(&p, &ab);
        assert_eq!(p.syllable_length(), 2 * n);
    }
}
