//! Finite groups given by multiplication tables, and injective
//! homomorphisms between them.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{EmbeddingViolation, GroupError};
use crate::group::Group;

/// Orders above this get sampled associativity checks instead of exhaustive.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 512;
pub const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 10_000;

/// Input description of a finite group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic {
        cyclic: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generator: Option<String>,
    },
    Table {
        elements: Vec<String>,
        table: Vec<Vec<usize>>,
    },
}

impl GroupSpec {
    pub fn cyclic(n: usize, generator: &str) -> Self {
        GroupSpec::Cyclic {
            cyclic: n,
            generator: Some(generator.to_string()),
        }
    }
}

/// A finite group. Element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        FiniteGroup {
            names: vec!["1".into()],
            table: vec![0],
            inverses: vec![0],
        }
    }

    /// Cyclic group of order `n` with elements `1, g, g^2, ...`.
    pub fn cyclic(n: usize, generator: &str) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::ZeroOrder);
        }
        let names = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => generator.to_string(),
                _ => format!("{generator}^{i}"),
            })
            .collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        Self::from_table(names, table)
    }

    pub fn load(spec: &GroupSpec) -> Result<Self, GroupError> {
        match spec {
            GroupSpec::Cyclic { cyclic, generator } => {
                Self::cyclic(*cyclic, generator.as_deref().unwrap_or("g"))
            }
            GroupSpec::Table { elements, table } => {
                Self::from_table(elements.clone(), table.clone())
            }
        }
    }

    /// Validate a multiplication table and build the group.
    #[allow(clippy::needless_range_loop)]
    pub fn from_table(names: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::Shape {
                rows: rows.len(),
                elements: n,
            });
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(GroupError::DuplicateName(name.clone()));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::OutOfRange {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        let name = |i: usize| names[i].clone();
        for g in 0..n {
            if rows[0][g] != g {
                return Err(GroupError::MissingIdentity(name(0), name(g), name(rows[0][g])));
            }
            if rows[g][0] != g {
                return Err(GroupError::MissingIdentity(name(g), name(0), name(rows[g][0])));
            }
        }
        for g in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for h in 0..n {
                let r = rows[g][h];
                if std::mem::replace(&mut row_seen[r], true) {
                    return Err(GroupError::NotLatin(name(r), format!("row `{}`", name(g))));
                }
                let c = rows[h][g];
                if std::mem::replace(&mut col_seen[c], true) {
                    return Err(GroupError::NotLatin(name(c), format!("column `{}`", name(g))));
                }
            }
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| table[a * n + b];
        let check = |a: usize, b: usize, c: usize| {
            if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                Err(GroupError::NotAssociative(name(a), name(b), name(c)))
            } else {
                Ok(())
            }
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        // Latin + identity: each row holds 0 exactly once.
        let inverses = (0..n)
            .map(|g| (0..n).find(|&h| mul(g, h) == 0).expect("latin row contains identity"))
            .collect();
        Ok(FiniteGroup {
            names,
            table,
            inverses,
        })
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_subgroup(&self, sub: &[usize]) -> bool {
        let set: HashSet<usize> = sub.iter().copied().collect();
        set.contains(&0)
            && set.iter().all(|&x| x < self.order())
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// Right cosets `sub·g`, each with the least-index member as its
    /// representative (the identity for `sub` itself), ordered by
    /// representative.
    pub fn coset_partition(&self, sub: &[usize]) -> Result<Vec<Coset>, GroupError> {
        if !self.is_subgroup(sub) {
            let names: Vec<&str> = sub
                .iter()
                .map(|&i| self.names.get(i).map_or("?", String::as_str))
                .collect();
            return Err(GroupError::NotSubgroup(format!("{{{}}}", names.join(", "))));
        }
        let mut assigned = vec![false; self.order()];
        let mut cosets = Vec::new();
        for g in 0..self.order() {
            if assigned[g] {
                continue;
            }
            let mut members: Vec<usize> = sub.iter().map(|&s| self.mul(s, g)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                assigned[m] = true;
            }
            // g is the first unassigned index, hence the least member.
            cosets.push(Coset {
                representative: g,
                members,
            });
        }
        Ok(cosets)
    }
}

/// A right coset of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl Group for FiniteGroup {
    type Element = usize;

    fn identity(&self) -> usize {
        0
    }

    fn multiply(&self, x: &usize, y: &usize) -> usize {
        self.mul(*x, *y)
    }

    fn invert(&self, x: &usize) -> usize {
        self.inverse(*x)
    }
}

/// Input description of an embedding: element names of the source mapped to
/// element names of the target. The identity may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub into: Option<serde_json::Value>,
    pub map: BTreeMap<String, String>,
}

/// A map `source → target` given by element indices.
#[derive(Clone, Debug)]
pub struct SubgroupEmbedding {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    pub map: Vec<usize>,
}

impl SubgroupEmbedding {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Self {
        SubgroupEmbedding {
            source,
            target,
            map,
        }
    }

    /// Resolve a name-based map. Unmapped identity defaults to identity;
    /// any other unmapped element is an arity violation.
    pub fn from_names(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        names: &BTreeMap<String, String>,
    ) -> Result<Self, String> {
        let mut map = Vec::with_capacity(source.order());
        for (i, name) in source.names().iter().enumerate() {
            let image = match names.get(name) {
                Some(t) => target
                    .element(t)
                    .ok_or_else(|| format!("unknown target element `{t}`"))?,
                None if i == 0 => 0,
                None => return Err(format!("no image given for `{name}`")),
            };
            map.push(image);
        }
        if let Some(extra) = names.keys().find(|k| source.element(k).is_none()) {
            return Err(format!("unknown source element `{extra}`"));
        }
        Ok(SubgroupEmbedding::new(source, target, map))
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let map = (0..group.order()).collect();
        SubgroupEmbedding::new(group.clone(), group, map)
    }

    /// Exhaustive check that the map is an injective homomorphism.
    pub fn check(&self) -> Result<(), EmbeddingViolation> {
        let (s, t) = (&*self.source, &*self.target);
        if self.map.len() != s.order() {
            return Err(EmbeddingViolation::Arity {
                got: self.map.len(),
                expected: s.order(),
            });
        }
        if let Some(i) = self.map.iter().position(|&m| m >= t.order()) {
            return Err(EmbeddingViolation::OutOfRange(s.name(i).to_string()));
        }
        if self.map[0] != 0 {
            return Err(EmbeddingViolation::IdentityNotPreserved(
                t.name(self.map[0]).to_string(),
            ));
        }
        let mut preimage = vec![None; t.order()];
        for (i, &m) in self.map.iter().enumerate() {
            if let Some(j) = preimage[m].replace(i) {
                return Err(EmbeddingViolation::NotInjective(
                    s.name(j).to_string(),
                    s.name(i).to_string(),
                    t.name(m).to_string(),
                ));
            }
        }
        for x in 0..s.order() {
            for y in 0..s.order() {
                if self.map[s.mul(x, y)] != t.mul(self.map[x], self.map[y]) {
                    return Err(EmbeddingViolation::NotHomomorphism(
                        s.name(x).to_string(),
                        s.name(y).to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SubgroupEmbedding) -> SubgroupEmbedding {
        let map = self.map.iter().map(|&m| other.map[m]).collect();
        SubgroupEmbedding::new(self.source.clone(), other.target.clone(), map)
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Image as a sorted list of target indices.
    pub fn image(&self) -> Vec<usize> {
        let mut v = self.map.clone();
        v.sort_unstable();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize, g: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n, g).unwrap())
    }

    #[test]
    fn cyclic_shorthand() {
        let c2 = FiniteGroup::load(&serde_json::from_str(r#"{"cyclic": 2}"#).unwrap()).unwrap();
        assert_eq!(c2.names(), ["1", "g"]);
        assert_eq!(c2.mul(1, 1), 0);
        let c4 = FiniteGroup::cyclic(4, "g").unwrap();
        assert_eq!(c4.name(2), "g^2");
        assert_eq!(c4.mul(2, 2), 0);
        assert_eq!(c4.element_order(1), 4);
        assert!(FiniteGroup::cyclic(0, "g").is_err());
    }

    #[test]
    fn rejects_bad_tables() {
        let err = FiniteGroup::from_table(vec!["1".into(), "g".into()], vec![vec![0, 1], vec![1, 1]]);
        assert!(matches!(err, Err(GroupError::NotLatin(..))));
        let err = FiniteGroup::from_table(vec!["1".into(), "g".into()], vec![vec![1, 0], vec![0, 1]]);
        assert!(matches!(err, Err(GroupError::MissingIdentity(..))));
        let err = FiniteGroup::from_table(vec!["1".into()], vec![vec![0, 0]]);
        assert!(matches!(err, Err(GroupError::Shape { .. })));
    }

    #[test]
    fn rejects_non_associative_latin_square() {
        // A loop of order 5 with identity that is not a group.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let names = ["1", "p", "q", "r", "s"].map(String::from).to_vec();
        let err = FiniteGroup::from_table(names, t).unwrap_err();
        assert!(matches!(err, GroupError::NotAssociative(..)), "{err:?}");
    }

    #[test]
    fn table_spec_parses() {
        let spec: GroupSpec =
            serde_json::from_str(r#"{"elements": ["1","b","B"], "table": [[0,1,2],[1,2,0],[2,0,1]]}"#)
                .unwrap();
        let g = FiniteGroup::load(&spec).unwrap();
        assert_eq!(g.inverse(1), 2);
    }

    #[test]
    fn inverses_are_involutive() {
        let s3 = FiniteGroup::from_table(
            ["1", "r", "r2", "s", "sr", "sr2"].map(String::from).to_vec(),
            s3_table(),
        )
        .unwrap();
        for x in 0..s3.order() {
            assert_eq!(s3.inverse(s3.inverse(x)), x);
            assert_eq!(s3.mul(x, s3.inverse(x)), 0);
        }
    }

    fn s3_table() -> Vec<Vec<usize>> {
        // elements as permutations of {0,1,2}; compose (xy)(i) = x(y(i))
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| idx([perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]]))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn embedding_checks() {
        let c2 = c(2, "g");
        let c4 = c(4, "g");
        let good = SubgroupEmbedding::new(c2.clone(), c4.clone(), vec![0, 2]);
        assert_eq!(good.check(), Ok(()));
        let bad = SubgroupEmbedding::new(c2.clone(), c4.clone(), vec![0, 1]);
        assert!(matches!(bad.check(), Err(EmbeddingViolation::NotHomomorphism(a, b)) if a == "g" && b == "g"));
        let triv = SubgroupEmbedding::new(Arc::new(FiniteGroup::trivial()), c4.clone(), vec![0]);
        assert_eq!(triv.check(), Ok(()));
        let not_inj = SubgroupEmbedding::new(c4.clone(), c2.clone(), vec![0, 1, 0, 1]);
        assert!(matches!(not_inj.check(), Err(EmbeddingViolation::NotInjective(..))));
    }

    #[test]
    fn embeddings_compose() {
        let c2 = c(2, "g");
        let c4 = c(4, "g");
        let e = SubgroupEmbedding::new(c2, c4.clone(), vec![0, 2]);
        // the automorphism g ↦ g^3 of C4
        let auto = SubgroupEmbedding::new(c4.clone(), c4, vec![0, 3, 2, 1]);
        assert_eq!(auto.check(), Ok(()));
        let comp = e.then(&auto);
        assert_eq!(comp.check(), Ok(()));
        assert_eq!(comp.map, vec![0, 2]);
    }

    #[test]
    fn embedding_from_names() {
        let c2 = c(2, "e");
        let c4 = c(4, "x");
        let names: BTreeMap<String, String> = [("e".to_string(), "x^2".to_string())].into();
        let e = SubgroupEmbedding::from_names(c2.clone(), c4.clone(), &names).unwrap();
        assert_eq!(e.map, vec![0, 2]);
        let missing = SubgroupEmbedding::from_names(c2, c4, &BTreeMap::new());
        assert!(missing.is_err());
    }

    #[test]
    fn coset_partitions() {
        let c4 = FiniteGroup::cyclic(4, "g").unwrap();
        let cosets = c4.coset_partition(&[0, 2]).unwrap();
        // oracle: enumerate {s·g : s ∈ sub} for each g by table
        let mut expected: Vec<Vec<usize>> = Vec::new();
        for g in 0..4 {
            let mut m: Vec<usize> = [0, 2].iter().map(|&s| c4.mul(s, g)).collect();
            m.sort();
            if !expected.contains(&m) {
                expected.push(m);
            }
        }
        assert_eq!(cosets.iter().map(|c| c.members.clone()).collect::<Vec<_>>(), expected);
        assert_eq!(cosets.iter().map(|c| c.representative).collect::<Vec<_>>(), [0, 1]);

        let c2 = FiniteGroup::cyclic(2, "g").unwrap();
        let cosets = c2.coset_partition(&[0]).unwrap();
        assert_eq!(cosets.iter().map(|c| c.representative).collect::<Vec<_>>(), [0, 1]);

        let whole = c4.coset_partition(&[0, 1, 2, 3]).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole[0].representative, 0);

        assert!(c4.coset_partition(&[0, 1]).is_err());
    }

    #[test]
    fn coset_partition_covers_nonabelian() {
        let s3 = FiniteGroup::from_table(
            ["1", "r", "r2", "s", "sr", "sr2"].map(String::from).to_vec(),
            s3_table(),
        )
        .unwrap();
        let sub = [0, 3];
        let cosets = s3.coset_partition(&sub).unwrap();
        let mut all: Vec<usize> = cosets.iter().flat_map(|c| c.members.clone()).collect();
        all.sort();
        assert_eq!(all, (0..6).collect::<Vec<_>>());
        assert!(cosets.iter().all(|c| c.members.len() == sub.len()));
        for c in &cosets {
            assert_eq!(c.representative, *c.members.iter().min().unwrap());
        }
    }
}
