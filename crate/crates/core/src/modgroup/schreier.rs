//! Coset tables of finite-index subgroups of PSL2(Z) and the
//! Reidemeister–Schreier procedure producing a free basis together with a
//! rewriting map from PSL2(Z)-words to words in that basis.
//!
//! PSL2(Z) is the free product of `S = [[0,-1],[1,0]]` (order 2) and
//! `U = [[0,-1],[1,1]]` (order 3), with `T = S U`.

use std::collections::{HashMap, VecDeque};

use super::element::{free_reduce, GroupElement};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuLetter {
    S,
    U,
}

impl SuLetter {
    pub fn matrix(self) -> GroupElement {
        match self {
            SuLetter::S => GroupElement::inversion(),
            SuLetter::U => GroupElement::from_entries(0, -1, 1, 1),
        }
    }

    fn index(self) -> usize {
        match self {
            SuLetter::S => 0,
            SuLetter::U => 1,
        }
    }
}

/// The congruence subgroups used by the presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Congruence {
    /// Principal congruence subgroup of level 2.
    Gamma2,
    /// `Gamma0(p)` for a prime `p`.
    Gamma0Prime(i128),
}

impl Congruence {
    pub fn contains(&self, g: &GroupElement) -> bool {
        let [a, b, c, d] = g.entries();
        match *self {
            Congruence::Gamma2 => b.rem_euclid(2) == 0 && c.rem_euclid(2) == 0 && a.rem_euclid(2) == 1 && d.rem_euclid(2) == 1,
            Congruence::Gamma0Prime(p) => c.rem_euclid(p) == 0,
        }
    }

    /// Level `N`: `T^N` and all its conjugates lie in the subgroup.
    pub fn level(&self) -> i128 {
        match *self {
            Congruence::Gamma2 => 2,
            Congruence::Gamma0Prime(p) => p,
        }
    }

    /// Key identifying the right coset `Γ g`.
    fn coset_key(&self, g: &GroupElement) -> (i128, i128, i128, i128) {
        let [a, b, c, d] = g.entries();
        match *self {
            Congruence::Gamma2 => (a.rem_euclid(2), b.rem_euclid(2), c.rem_euclid(2), d.rem_euclid(2)),
            Congruence::Gamma0Prime(p) => {
                let (c, d) = (c.rem_euclid(p), d.rem_euclid(p));
                if c == 0 {
                    (0, 1, 0, 0)
                } else {
                    (1, (d * mod_inverse(c, p)).rem_euclid(p), 0, 0)
                }
            }
        }
    }
}

fn mod_inverse(x: i128, p: i128) -> i128 {
    let (mut r0, mut r1) = (x.rem_euclid(p), p);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p)
}

/// Writes `g` as a word in `S` and `U` whose product is `±g`.
pub fn su_word(g: &GroupElement) -> Vec<SuLetter> {
    // g = T^{n_1} S T^{n_2} S ... T^{n_last}
    let [mut a, mut b, mut c, mut d] = g.entries();
    let mut exps = Vec::new();
    while c != 0 {
        let mut n = a.div_euclid(c);
        if (a - n * c).abs() * 2 > c.abs() {
            n += 1;
        }
        a -= n * c;
        b -= n * d;
        exps.push(n);
        (a, b, c, d) = (-c, -d, a, b);
    }
    // c == 0 so the remainder is ±T^{b/d}
    exps.push(b * d);
    let mut out = Vec::new();
    for (i, &n) in exps.iter().enumerate() {
        if i > 0 {
            out.push(SuLetter::S);
        }
        let reps = n.unsigned_abs();
        for _ in 0..reps {
            if n > 0 {
                out.extend([SuLetter::S, SuLetter::U]);
            } else {
                out.extend([SuLetter::U, SuLetter::U, SuLetter::S]);
            }
        }
    }
    out
}

/// Coset graph of a subgroup under right multiplication by `S` and `U`,
/// a spanning-tree transversal, and the resulting free basis.
#[derive(Clone, Debug)]
pub struct SchreierSystem {
    group: Congruence,
    keys: HashMap<(i128, i128, i128, i128), usize>,
    transversal: Vec<GroupElement>,
    action: Vec<[usize; 2]>,
    edge_words: Vec<[Vec<i32>; 2]>,
    generators: Vec<GroupElement>,
}

impl SchreierSystem {
    pub fn build(group: Congruence) -> Result<Self> {
        let mut keys = HashMap::new();
        let mut transversal = vec![GroupElement::from_entries(1, 0, 0, 1)];
        keys.insert(group.coset_key(&transversal[0]), 0usize);
        let mut action: Vec<[usize; 2]> = Vec::new();
        let mut tree = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let mut row = [usize::MAX; 2];
            let mut tree_row = [false; 2];
            for y in [SuLetter::S, SuLetter::U] {
                let m = transversal[x].try_mul(&y.matrix())?;
                let key = group.coset_key(&m);
                let target = match keys.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = transversal.len();
                        keys.insert(key, t);
                        transversal.push(m);
                        queue.push_back(t);
                        tree_row[y.index()] = true;
                        t
                    }
                };
                row[y.index()] = target;
            }
            if action.len() <= x {
                action.resize(x + 1, [usize::MAX; 2]);
                tree.resize(x + 1, [false; 2]);
            }
            action[x] = row;
            tree[x] = tree_row;
        }
        let n = transversal.len();
        action.resize(n, [usize::MAX; 2]);
        tree.resize(n, [false; 2]);

        let schreier = |x: usize, y: SuLetter| -> Result<GroupElement> {
            let xy = action[x][y.index()];
            transversal[x].try_mul(&y.matrix())?.try_mul(&transversal[xy].inverse())
        };

        let mut generators: Vec<GroupElement> = Vec::new();
        let mut edge_words: Vec<[Option<Vec<i32>>; 2]> = vec![[None, None]; n];

        // S-edges pair up into mutually inverse generators.
        for x in 0..n {
            let xs = action[x][0];
            if xs == x {
                return Err(Error::InvalidArgument("subgroup has elliptic elements of order 2".into()));
            }
            if edge_words[x][0].is_some() {
                continue;
            }
            if tree[x][0] || tree[xs][0] {
                edge_words[x][0] = Some(vec![]);
                edge_words[xs][0] = Some(vec![]);
            } else {
                generators.push(schreier(x, SuLetter::S)?);
                let i = generators.len() as i32;
                edge_words[x][0] = Some(vec![i]);
                edge_words[xs][0] = Some(vec![-i]);
            }
        }

        // Each U-cycle carries one relator s(e0)s(e1)s(e2) = 1; use it to eliminate one edge.
        for x in 0..n {
            if edge_words[x][1].is_some() {
                continue;
            }
            let cycle = [x, action[x][1], action[action[x][1]][1]];
            if cycle[1] == x {
                return Err(Error::InvalidArgument("subgroup has elliptic elements of order 3".into()));
            }
            let live: Vec<usize> = (0..3).filter(|&i| !tree[cycle[i]][1]).collect();
            for i in 0..3 {
                if tree[cycle[i]][1] {
                    edge_words[cycle[i]][1] = Some(vec![]);
                }
            }
            match live.len() {
                1 => edge_words[cycle[live[0]]][1] = Some(vec![]),
                2 => {
                    generators.push(schreier(cycle[live[0]], SuLetter::U)?);
                    let i = generators.len() as i32;
                    edge_words[cycle[live[0]]][1] = Some(vec![i]);
                    edge_words[cycle[live[1]]][1] = Some(vec![-i]);
                }
                3 => {
                    generators.push(schreier(cycle[0], SuLetter::U)?);
                    let i = generators.len() as i32;
                    generators.push(schreier(cycle[1], SuLetter::U)?);
                    let j = generators.len() as i32;
                    edge_words[cycle[0]][1] = Some(vec![i]);
                    edge_words[cycle[1]][1] = Some(vec![j]);
                    edge_words[cycle[2]][1] = Some(vec![-j, -i]);
                }
                _ => unreachable!("a spanning tree cannot contain a whole U-cycle"),
            }
        }

        let edge_words = edge_words
            .into_iter()
            .map(|[s, u]| [s.expect("every S-edge assigned"), u.expect("every U-edge assigned")])
            .collect();
        let generators = generators
            .into_iter()
            .enumerate()
            .map(|(i, g)| g.with_word(vec![i as i32 + 1]))
            .collect();
        Ok(Self { group, keys, transversal, action, edge_words, generators })
    }

    pub fn index(&self) -> usize {
        self.transversal.len()
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Coset index of `Γ g`.
    pub fn coset_of(&self, g: &GroupElement) -> usize {
        self.keys[&self.group.coset_key(g)]
    }

    pub fn coset_rep(&self, coset: usize) -> &GroupElement {
        &self.transversal[coset]
    }

    /// Number of cosets fixed by `S` and by `U` (elliptic points of order 2, 3).
    pub fn elliptic_counts(&self) -> (usize, usize) {
        let e2 = (0..self.index()).filter(|&x| self.action[x][0] == x).count();
        let e3 = (0..self.index()).filter(|&x| self.action[x][1] == x).count();
        (e2, e3)
    }

    /// Orbits of `T = S U` acting on cosets; each orbit is a cusp, its length the width.
    pub fn t_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.index()];
        let mut orbits = Vec::new();
        for start in 0..self.index() {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                orbit.push(x);
                x = self.action[self.action[x][0]][1];
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// Rewrites `g` as a freely reduced word in the free basis.
    pub fn rewrite(&self, g: &GroupElement) -> Result<Vec<i32>> {
        if !self.group.contains(g) {
            return Err(Error::NotInGroup(g.to_string(), format!("{:?}", self.group)));
        }
        let mut coset = 0usize;
        let mut word = Vec::new();
        for y in su_word(g) {
            word.extend_from_slice(&self.edge_words[coset][y.index()]);
            coset = self.action[coset][y.index()];
        }
        debug_assert_eq!(coset, 0);
        Ok(free_reduce(word))
    }
}

/// Multiplies out a signed word over `generators`.
pub fn evaluate_word(generators: &[GroupElement], word: &[i32]) -> Result<GroupElement> {
    let mut out = GroupElement::identity();
    for &g in word {
        let idx = g.unsigned_abs() as usize;
        let gen = generators
            .get(idx.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidArgument(format!("generator index {g} out of range")))?;
        let factor = if g > 0 { gen.clone() } else { gen.inverse() };
        out = out.try_mul(&factor)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(word: &[SuLetter]) -> GroupElement {
        word.iter().fold(GroupElement::identity(), |acc, y| &acc * &y.matrix())
    }

    #[test]
    fn su_word_round_trips() {
        for m in [
            GroupElement::new(7, -2, 11, -3).unwrap(),
            GroupElement::new(1, 0, 2, 1).unwrap(),
            GroupElement::new(-5, 3, 8, -5).unwrap(),
            GroupElement::translation(-4),
            GroupElement::identity(),
        ] {
            assert_eq!(product(&su_word(&m)), m, "{m}");
        }
    }

    #[test]
    fn su_relations() {
        let s = SuLetter::S.matrix();
        let u = SuLetter::U.matrix();
        assert!((&s * &s).is_identity());
        assert!((&(&u * &u) * &u).is_identity());
        assert_eq!(&s * &u, GroupElement::translation(1));
    }

    #[test]
    fn gamma0_11_has_index_12_and_rank_3() {
        let sys = SchreierSystem::build(Congruence::Gamma0Prime(11)).unwrap();
        assert_eq!(sys.index(), 12);
        assert_eq!(sys.generators().len(), 3);
        assert_eq!(sys.elliptic_counts(), (0, 0));
        let mut widths: Vec<usize> = sys.t_orbits().iter().map(Vec::len).collect();
        widths.sort();
        assert_eq!(widths, vec![1, 11]);
    }

    #[test]
    fn gamma2_has_index_6_and_rank_2() {
        let sys = SchreierSystem::build(Congruence::Gamma2).unwrap();
        assert_eq!(sys.index(), 6);
        assert_eq!(sys.generators().len(), 2);
        let widths: Vec<usize> = sys.t_orbits().iter().map(Vec::len).collect();
        assert_eq!(widths, vec![2, 2, 2]);
    }

    #[test]
    fn rewriting_reproduces_elements() {
        let sys = SchreierSystem::build(Congruence::Gamma0Prime(11)).unwrap();
        for g in sys.generators() {
            assert!(Congruence::Gamma0Prime(11).contains(g));
        }
        for m in [
            GroupElement::new(7, -2, 11, -3).unwrap(),
            GroupElement::new(8, -3, 11, -4).unwrap(),
            GroupElement::new(1, 0, -11, 1).unwrap(),
            GroupElement::new(5, 2, 22, 9).unwrap(),
        ] {
            let w = sys.rewrite(&m).unwrap();
            assert_eq!(evaluate_word(sys.generators(), &w).unwrap(), m);
        }
        assert!(sys.rewrite(&GroupElement::inversion()).is_err());
    }
}
