//! Root systems of types A–G with Bourbaki numbering: enumeration by
//! reflection closure, Cartan pairings through an integer Gram matrix,
//! polar types, highest-root sequences, and representatives of sets of
//! mutually perpendicular positive roots.
//!
//! Conventions used throughout the crate:
//! * `cartan[i][j] = ⟨α_j, α_i∨⟩ = 2(α_i,α_j)/(α_i,α_i)`;
//! * a root is a coefficient vector over the simple roots, and the simple
//!   reflection acts by `s_i(β) = β − (Σ_j cartan[i][j]·c_j)·α_i`;
//! * positive roots are indexed `0..n_pos` in (height, lex) order — the
//!   fixed total order on which structure constants and unipotent normal
//!   forms depend — and the negative of root `r` sits at `r + n_pos`
//!   (indices taken mod `2·n_pos`).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{ChevError, Result};

/// A root as an integer coefficient vector over the simple roots.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Root {
    pub coeffs: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Positive means all coefficients ≥ 0 (roots never mix signs).
    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// Bourbaki node numbers (1-based) carrying a nonzero coefficient.
    pub fn support(&self) -> BTreeSet<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

impl fmt::Display for Root {
    /// Compact Bourbaki string: `(2234321)`, negatives as `-(2234321)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = self.coeffs.iter().any(|&c| c < 0);
        let digits: String = self
            .coeffs
            .iter()
            .map(|&c| {
                let a = c.abs();
                assert!(a <= 9, "coefficient {a} out of single-digit display range");
                char::from_digit(a as u32, 10).unwrap()
            })
            .collect();
        if neg {
            write!(f, "-({digits})")
        } else {
            write!(f, "({digits})")
        }
    }
}

/// An integer vector over the fundamental coweights ω_j∨
/// (⟨α_i, ω_j∨⟩ = δ_ij).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coweight(pub Vec<i64>);

/// A fully enumerated finite crystallographic root system.
pub struct RootSystem {
    pub letter: char,
    pub rank: usize,
    /// Integer Gram matrix of the simple roots (scaled per type so all
    /// entries are integers; simply-laced types use (α,α) = 2).
    pub gram: Vec<Vec<i64>>,
    /// `cartan[i][j] = ⟨α_j, α_i∨⟩`.
    pub cartan: Vec<Vec<i64>>,
    /// All roots; `0..n_pos` positive in (height, lex) order, then the
    /// negatives in matching order.
    roots: Vec<Root>,
    pub n_pos: usize,
    index: HashMap<Vec<i64>, usize>,
    /// `simple_refl[i][r]` = index of s_i(root r).
    pub simple_refl: Vec<Vec<usize>>,
}

fn gram_matrix(letter: char, rank: usize) -> Result<Vec<Vec<i64>>> {
    let n = rank;
    let mut g = vec![vec![0i64; n]; n];
    let chain = |g: &mut Vec<Vec<i64>>, edges: &[(usize, usize)]| {
        for i in 0..n {
            g[i][i] = 2;
        }
        for &(a, b) in edges {
            g[a][b] = -1;
            g[b][a] = -1;
        }
    };
    match (letter, rank) {
        ('A', n) if n >= 1 => {
            let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
            chain(&mut g, &edges);
        }
        ('B', n) if n >= 2 => {
            // α_i = e_i − e_{i+1} (long), α_n = e_n (short).
            let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
            chain(&mut g, &edges);
            g[n - 1][n - 1] = 1;
        }
        ('C', n) if n >= 2 => {
            // α_i = e_i − e_{i+1}, α_n = 2e_n.
            let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
            chain(&mut g, &edges);
            g[n - 1][n - 1] = 4;
            g[n - 2][n - 1] = -2;
            g[n - 1][n - 2] = -2;
        }
        ('D', n) if n >= 3 => {
            // Chain 1–2–…–(n−2) with both n−1 and n attached to n−2.
            let mut edges: Vec<_> = (0..n.saturating_sub(3)).map(|i| (i, i + 1)).collect();
            edges.push((n - 3, n - 2));
            edges.push((n - 3, n - 1));
            chain(&mut g, &edges);
        }
        ('E', n) if (6..=8).contains(&n) => {
            // Chain 1–3–4–5–6(–7)(–8); node 2 attached to node 4.
            let mut edges = vec![(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)];
            if n >= 7 {
                edges.push((5, 6));
            }
            if n == 8 {
                edges.push((6, 7));
            }
            chain(&mut g, &edges);
        }
        ('F', 4) => {
            // α1, α2 long; α3, α4 short; doubled so the short norm is 2.
            g = vec![
                vec![4, -2, 0, 0],
                vec![-2, 4, -2, 0],
                vec![0, -2, 2, -1],
                vec![0, 0, -1, 2],
            ];
        }
        ('G', 2) => {
            // α1 short, α2 long.
            g = vec![vec![2, -3], vec![-3, 6]];
        }
        _ => {
            return Err(ChevError::usage(format!("unsupported root system {letter}{rank}")));
        }
    }
    Ok(g)
}

impl RootSystem {
    /// Build and fully enumerate the root system of the given type.
    pub fn build(letter: char, rank: usize) -> Result<RootSystem> {
        let gram = gram_matrix(letter, rank)?;
        let n = rank;
        let mut cartan = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let num = 2 * gram[i][j];
                assert_eq!(num % gram[i][i], 0, "Gram matrix not crystallographic");
                cartan[i][j] = num / gram[i][i];
            }
        }

        // Reflection closure from the simple roots. Every root is Weyl-
        // conjugate to a simple root (each length class contains one), so
        // closing under the simple reflections enumerates all of Φ.
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: Vec<Vec<i64>> = Vec::new();
        for i in 0..n {
            let mut v = vec![0i64; n];
            v[i] = 1;
            seen.insert(v.clone());
            queue.push(v);
        }
        while let Some(v) = queue.pop() {
            for i in 0..n {
                let pair: i64 = (0..n).map(|j| cartan[i][j] * v[j]).sum();
                let mut w = v.clone();
                w[i] -= pair;
                if seen.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }

        let mut positives: Vec<Root> = seen
            .iter()
            .filter(|v| v.iter().all(|&c| c >= 0))
            .map(|v| Root { coeffs: v.clone() })
            .collect();
        assert_eq!(positives.len() * 2, seen.len(), "sign symmetry broken");
        positives.sort_by_key(|r| (r.height(), r.coeffs.clone()));
        let n_pos = positives.len();
        let mut roots = positives;
        for i in 0..n_pos {
            let neg = Root { coeffs: roots[i].coeffs.iter().map(|c| -c).collect() };
            roots.push(neg);
        }
        let index: HashMap<Vec<i64>, usize> =
            roots.iter().enumerate().map(|(i, r)| (r.coeffs.clone(), i)).collect();

        let mut simple_refl = vec![vec![0usize; roots.len()]; n];
        for i in 0..n {
            for (r, root) in roots.iter().enumerate() {
                let pair: i64 = (0..n).map(|j| cartan[i][j] * root.coeffs[j]).sum();
                let mut w = root.coeffs.clone();
                w[i] -= pair;
                simple_refl[i][r] = index[&w];
            }
        }

        Ok(RootSystem { letter, rank, gram, cartan, roots, n_pos, index, simple_refl })
    }

    pub fn n_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn root(&self, idx: usize) -> &Root {
        &self.roots[idx]
    }

    /// Index of a root given by coefficients, if it is a root.
    pub fn index_of(&self, coeffs: &[i64]) -> Option<usize> {
        self.index.get(coeffs).copied()
    }

    /// Index of the root, panicking with context if absent.
    pub fn expect_root(&self, coeffs: &[i64]) -> usize {
        self.index_of(coeffs)
            .unwrap_or_else(|| panic!("{:?} is not a root of {}{}", coeffs, self.letter, self.rank))
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        idx < self.n_pos
    }

    /// Index of −root.
    pub fn neg(&self, idx: usize) -> usize {
        (idx + self.n_pos) % (2 * self.n_pos)
    }

    pub fn height(&self, idx: usize) -> i64 {
        self.roots[idx].height()
    }

    /// Index of the i-th simple root (0-based node).
    pub fn simple(&self, i: usize) -> usize {
        let mut v = vec![0i64; self.rank];
        v[i] = 1;
        self.index[&v]
    }

    /// Inner product through the integer Gram matrix.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }

    /// Cartan integer ⟨β, α∨⟩ = 2(β,α)/(α,α).
    pub fn pairing(&self, beta: usize, alpha: usize) -> i64 {
        let b = &self.roots[beta].coeffs;
        let a = &self.roots[alpha].coeffs;
        let num = 2 * self.inner(b, a);
        let den = self.inner(a, a);
        assert_eq!(num % den, 0, "pairing not integral");
        num / den
    }

    /// s_α(β) = β − ⟨β,α∨⟩α, as a root index.
    pub fn reflect(&self, alpha: usize, beta: usize) -> usize {
        let p = self.pairing(beta, alpha);
        let a = &self.roots[alpha].coeffs;
        let b = &self.roots[beta].coeffs;
        let v: Vec<i64> = (0..self.rank).map(|j| b[j] - p * a[j]).collect();
        self.expect_root(&v)
    }

    /// Index of α+β if that is a root.
    pub fn add_roots(&self, a: usize, b: usize) -> Option<usize> {
        let v: Vec<i64> = (0..self.rank)
            .map(|j| self.roots[a].coeffs[j] + self.roots[b].coeffs[j])
            .collect();
        self.index_of(&v)
    }

    /// The coroot α∨ in fundamental-coweight coordinates:
    /// α∨ = Σ_j ⟨α_j, α∨⟩ ω_j∨.
    pub fn coroot(&self, alpha: usize) -> Coweight {
        Coweight((0..self.rank).map(|j| self.pairing(self.simple(j), alpha)).collect())
    }

    /// Highest root: the last positive root in (height, lex) order.
    pub fn highest_root(&self) -> usize {
        self.n_pos - 1
    }

    /// Polar type ℘ = {i : ⟨α_i, φ∨⟩ ≠ 0}, 1-based node numbers.
    pub fn polar_type(&self) -> BTreeSet<usize> {
        let phi = self.highest_root();
        (0..self.rank)
            .filter(|&i| self.pairing(self.simple(i), phi) != 0)
            .map(|i| i + 1)
            .collect()
    }

    // -- Subsystem machinery (standard parabolic subsets) -------------------

    /// Adjacency of two nodes in the Dynkin diagram (0-based).
    fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.cartan[i][j] != 0
    }

    /// Connected components of a node subset (0-based).
    fn components(&self, nodes: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut left: BTreeSet<usize> = nodes.clone();
        let mut out = Vec::new();
        while let Some(&start) = left.iter().next() {
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            left.remove(&start);
            while let Some(v) = stack.pop() {
                comp.insert(v);
                let nbrs: Vec<usize> =
                    left.iter().copied().filter(|&u| self.adjacent(v, u)).collect();
                for u in nbrs {
                    left.remove(&u);
                    stack.push(u);
                }
            }
            out.push(comp);
        }
        out
    }

    /// Highest root of the parabolic subsystem on a connected node set
    /// (0-based nodes): the (height, lex)-largest positive root supported
    /// inside it.
    pub fn sub_highest_root(&self, nodes: &BTreeSet<usize>) -> usize {
        (0..self.n_pos)
            .rev()
            .find(|&r| {
                self.roots[r]
                    .coeffs
                    .iter()
                    .enumerate()
                    .all(|(j, &c)| c == 0 || nodes.contains(&j))
            })
            .expect("nonempty node set has roots")
    }

    /// Polar type of the subsystem on `nodes` (0-based in, 0-based out).
    fn sub_polar_type(&self, nodes: &BTreeSet<usize>) -> BTreeSet<usize> {
        let phi = self.sub_highest_root(nodes);
        nodes
            .iter()
            .copied()
            .filter(|&i| self.pairing(self.simple(i), phi) != 0)
            .collect()
    }

    /// The circled-node set J of a supported opposition diagram name.
    pub fn diagram_nodes(&self, diagram: &str) -> Result<BTreeSet<usize>> {
        let j: &[usize] = match (self.letter, self.rank, diagram) {
            ('E', 7, "E7;1") => &[1],
            ('E', 7, "E7;2") => &[1, 6],
            ('E', 7, "E7;3") => &[1, 6, 7],
            ('E', 7, "E7;4") => &[1, 3, 4, 6],
            _ => {
                return Err(ChevError::usage(format!(
                    "unknown opposition diagram {diagram} for {}{}",
                    self.letter, self.rank
                )))
            }
        };
        Ok(j.iter().copied().collect())
    }

    /// The sequence φ_1, …, φ_N of mutually perpendicular roots produced
    /// by iterated polar-node removal, steered by the circled nodes J of
    /// the named diagram: at each step exactly one available component has
    /// its polar type inside the not-yet-consumed part of J; its highest
    /// root is emitted and its polar nodes are removed.
    pub fn highest_root_sequence(&self, diagram: &str) -> Result<Vec<usize>> {
        let j = self.diagram_nodes(diagram)?;
        let mut j_rem: BTreeSet<usize> = j.iter().map(|&x| x - 1).collect();
        let mut comps = self.components(&(0..self.rank).collect());
        let mut out = Vec::new();
        while !j_rem.is_empty() {
            let eligible: Vec<usize> = comps
                .iter()
                .enumerate()
                .filter(|(_, c)| self.sub_polar_type(c).is_subset(&j_rem))
                .map(|(i, _)| i)
                .collect();
            assert_eq!(
                eligible.len(),
                1,
                "polar-node removal must be forced by J at every step"
            );
            let comp = comps.remove(eligible[0]);
            out.push(self.sub_highest_root(&comp));
            let polar = self.sub_polar_type(&comp);
            for x in &polar {
                j_rem.remove(x);
            }
            let rest: BTreeSet<usize> = comp.difference(&polar).copied().collect();
            comps.extend(self.components(&rest));
        }
        Ok(out)
    }

    /// Representatives of W-orbits on sets of k mutually perpendicular
    /// positive roots: run the component-choice algorithm in every order
    /// and deduplicate the resulting k-sets.
    pub fn perp_set_orbit_reps(&self, k: usize) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let comps = self.components(&(0..self.rank).collect());
        let mut chosen: Vec<usize> = Vec::new();
        self.perp_rec(k, comps, &mut chosen, &mut found);
        found.into_iter().collect()
    }

    fn perp_rec(
        &self,
        k: usize,
        comps: Vec<BTreeSet<usize>>,
        chosen: &mut Vec<usize>,
        found: &mut BTreeSet<Vec<usize>>,
    ) {
        if chosen.len() == k {
            let mut set = chosen.clone();
            set.sort_unstable();
            found.insert(set);
            return;
        }
        for (i, comp) in comps.iter().enumerate() {
            let phi = self.sub_highest_root(comp);
            let polar = self.sub_polar_type(comp);
            let rest: BTreeSet<usize> = comp.difference(&polar).copied().collect();
            let mut next = comps.clone();
            next.remove(i);
            next.extend(self.components(&rest));
            chosen.push(phi);
            self.perp_rec(k, next, chosen, found);
            chosen.pop();
        }
    }

    /// Parse a root literal: `(2234321)` or `-(2234321)` in Bourbaki node
    /// order, one digit per node.
    pub fn parse_root(&self, s: &str) -> Result<usize> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let inner = body
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| ChevError::usage(format!("malformed root literal {s}")))?;
        let digits: Vec<i64> = inner
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as i64)
                    .ok_or_else(|| ChevError::usage(format!("bad digit in root literal {s}")))
            })
            .collect::<Result<_>>()?;
        if digits.len() != self.rank {
            return Err(ChevError::usage(format!(
                "root literal {} has {} digits, expected {}",
                s,
                digits.len(),
                self.rank
            )));
        }
        let coeffs: Vec<i64> = if neg { digits.iter().map(|d| -d).collect() } else { digits };
        self.index_of(&coeffs)
            .ok_or_else(|| ChevError::usage(format!("{s} is not a root of {}{}", self.letter, self.rank)))
    }
}

/// Expected root counts per type, from the classification formulas; used
/// by tests to validate the enumeration (never fed into it).
pub fn expected_root_count(letter: char, rank: usize) -> Option<usize> {
    let n = rank;
    Some(match letter {
        'A' => n * (n + 1),
        'B' | 'C' => 2 * n * n,
        'D' => 2 * n * (n - 1),
        'E' => match n {
            6 => 72,
            7 => 126,
            8 => 240,
            _ => return None,
        },
        'F' => 48,
        'G' => 12,
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_systems() -> Vec<RootSystem> {
        let mut out = Vec::new();
        for n in 1..=5 {
            out.push(RootSystem::build('A', n).unwrap());
        }
        for n in 2..=4 {
            out.push(RootSystem::build('B', n).unwrap());
        }
        for n in 2..=4 {
            out.push(RootSystem::build('C', n).unwrap());
        }
        for n in 3..=6 {
            out.push(RootSystem::build('D', n).unwrap());
        }
        for n in 6..=8 {
            out.push(RootSystem::build('E', n).unwrap());
        }
        out.push(RootSystem::build('F', 4).unwrap());
        out.push(RootSystem::build('G', 2).unwrap());
        out
    }

    #[test]
    fn enumeration_matches_classification_counts() {
        for rs in all_systems() {
            let expected = expected_root_count(rs.letter, rs.rank).unwrap();
            assert_eq!(
                rs.n_roots(),
                expected,
                "{}{} root count",
                rs.letter,
                rs.rank
            );
        }
    }

    #[test]
    fn negation_indexing() {
        let rs = RootSystem::build('D', 4).unwrap();
        for r in 0..rs.n_roots() {
            let n = rs.neg(r);
            assert_eq!(rs.neg(n), r);
            for j in 0..rs.rank {
                assert_eq!(rs.root(r).coeffs[j], -rs.root(n).coeffs[j]);
            }
        }
    }

    #[test]
    fn reflections_permute_roots() {
        for rs in all_systems() {
            for i in 0..rs.rank {
                let mut seen = vec![false; rs.n_roots()];
                for r in 0..rs.n_roots() {
                    let img = rs.simple_refl[i][r];
                    assert!(!seen[img]);
                    seen[img] = true;
                    // s_i is an involution.
                    assert_eq!(rs.simple_refl[i][img], r);
                }
                // s_i(α_i) = −α_i, and s_i permutes the other positives.
                let si = rs.simple(i);
                assert_eq!(rs.simple_refl[i][si], rs.neg(si));
                for r in 0..rs.n_pos {
                    if r != si {
                        assert!(rs.is_positive(rs.simple_refl[i][r]));
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_is_cartan_on_simples() {
        for rs in all_systems() {
            for i in 0..rs.rank {
                assert_eq!(rs.pairing(rs.simple(i), rs.simple(i)), 2);
                for j in 0..rs.rank {
                    assert_eq!(rs.pairing(rs.simple(j), rs.simple(i)), rs.cartan[i][j]);
                }
            }
        }
    }

    #[test]
    fn reflect_lands_on_roots_everywhere() {
        // reflect() panics internally if the image is not a root; running
        // it over every pair is the closure check.
        for rs in all_systems() {
            if rs.n_roots() > 60 {
                continue; // big ones covered via simple_refl construction
            }
            for a in 0..rs.n_roots() {
                for b in 0..rs.n_roots() {
                    let img = rs.reflect(a, b);
                    assert_eq!(rs.reflect(a, img), b);
                }
            }
        }
    }

    #[test]
    fn highest_root_is_maximal() {
        for rs in all_systems() {
            let phi = rs.highest_root();
            let pc = &rs.root(phi).coeffs;
            for r in 0..rs.n_pos {
                for j in 0..rs.rank {
                    assert!(
                        rs.root(r).coeffs[j] <= pc[j],
                        "{}{}: root {} exceeds φ at node {}",
                        rs.letter,
                        rs.rank,
                        rs.root(r),
                        j + 1
                    );
                }
            }
        }
    }

    #[test]
    fn e7_highest_root_and_phi_pairings() {
        let rs = RootSystem::build('E', 7).unwrap();
        assert_eq!(rs.n_pos, 63);
        let phi = rs.highest_root();
        assert_eq!(rs.root(phi).coeffs, vec![2, 2, 3, 4, 3, 2, 1]);
        // ⟨α_i, φ∨⟩ ≠ 0 exactly at node 1.
        for i in 0..7 {
            let p = rs.pairing(rs.simple(i), phi);
            if i == 0 {
                assert_eq!(p, 1);
            } else {
                assert_eq!(p, 0);
            }
        }
        // ⟨φ∨, α⟩ ∈ {0,1,2} on positives, 2 only at φ itself.
        for r in 0..rs.n_pos {
            let v = rs.pairing(r, phi);
            assert!((0..=2).contains(&v));
            assert_eq!(v == 2, r == phi);
        }
    }

    #[test]
    fn polar_types() {
        assert_eq!(
            RootSystem::build('E', 7).unwrap().polar_type(),
            [1].into_iter().collect::<BTreeSet<_>>()
        );
        assert_eq!(
            RootSystem::build('E', 8).unwrap().polar_type(),
            [8].into_iter().collect::<BTreeSet<_>>()
        );
        for n in 2..=5 {
            assert_eq!(
                RootSystem::build('A', n).unwrap().polar_type(),
                [1, n].into_iter().collect::<BTreeSet<_>>()
            );
        }
        assert_eq!(
            RootSystem::build('D', 4).unwrap().polar_type(),
            [2].into_iter().collect::<BTreeSet<_>>()
        );
    }

    #[test]
    fn e7_highest_root_sequences() {
        let rs = RootSystem::build('E', 7).unwrap();
        let phi_e7 = rs.expect_root(&[2, 2, 3, 4, 3, 2, 1]);
        let phi_d6 = rs.expect_root(&[0, 1, 1, 2, 2, 2, 1]);
        let phi_d4 = rs.expect_root(&[0, 1, 1, 2, 1, 0, 0]);
        let a3 = rs.simple(2);
        let a7 = rs.simple(6);

        assert_eq!(rs.highest_root_sequence("E7;1").unwrap(), vec![phi_e7]);
        assert_eq!(rs.highest_root_sequence("E7;2").unwrap(), vec![phi_e7, phi_d6]);
        assert_eq!(
            rs.highest_root_sequence("E7;3").unwrap(),
            vec![phi_e7, phi_d6, a7]
        );
        assert_eq!(
            rs.highest_root_sequence("E7;4").unwrap(),
            vec![phi_e7, phi_d6, phi_d4, a3]
        );
        // Every sequence is mutually perpendicular.
        for d in ["E7;1", "E7;2", "E7;3", "E7;4"] {
            let seq = rs.highest_root_sequence(d).unwrap();
            for i in 0..seq.len() {
                for j in 0..i {
                    assert_eq!(rs.pairing(seq[i], seq[j]), 0, "{d} not perpendicular");
                }
            }
        }
    }

    #[test]
    fn e7_perp_orbit_representatives() {
        let rs = RootSystem::build('E', 7).unwrap();
        let phi_e7 = rs.expect_root(&[2, 2, 3, 4, 3, 2, 1]);
        let phi_d6 = rs.expect_root(&[0, 1, 1, 2, 2, 2, 1]);
        let phi_d4 = rs.expect_root(&[0, 1, 1, 2, 1, 0, 0]);

        assert_eq!(rs.perp_set_orbit_reps(1), vec![vec![phi_e7]]);
        assert_eq!(rs.perp_set_orbit_reps(2).len(), 1);

        let k3 = rs.perp_set_orbit_reps(3);
        assert_eq!(k3.len(), 2);
        let mut expect3 = vec![
            {
                let mut v = vec![phi_e7, phi_d6, rs.simple(6)];
                v.sort_unstable();
                v
            },
            {
                let mut v = vec![phi_e7, phi_d6, phi_d4];
                v.sort_unstable();
                v
            },
        ];
        expect3.sort();
        assert_eq!(k3, expect3);

        let k4 = rs.perp_set_orbit_reps(4);
        assert_eq!(k4.len(), 4);
        let mut expect4: Vec<Vec<usize>> = [1usize, 2, 4, 6] // nodes 2,3,5,7 (0-based)
            .iter()
            .map(|&j| {
                let mut v = vec![phi_e7, phi_d6, phi_d4, rs.simple(j)];
                v.sort_unstable();
                v
            })
            .collect();
        expect4.sort();
        assert_eq!(k4, expect4);
    }

    #[test]
    fn root_literals_roundtrip() {
        let rs = RootSystem::build('E', 7).unwrap();
        for r in 0..rs.n_roots() {
            let s = rs.root(r).to_string();
            assert_eq!(rs.parse_root(&s).unwrap(), r);
        }
        assert!(rs.parse_root("(2222222)").is_err()); // not a root
        assert!(rs.parse_root("(123)").is_err()); // wrong rank
    }

    #[test]
    fn coroot_coordinates() {
        let rs = RootSystem::build('E', 7).unwrap();
        // On simple roots the coroot coordinates are Cartan matrix rows.
        for i in 0..rs.rank {
            let Coweight(v) = rs.coroot(rs.simple(i));
            for j in 0..rs.rank {
                assert_eq!(v[j], rs.cartan[i][j]);
            }
        }
        // φ∨ of E7 pairs to 1 with α_1 only.
        let Coweight(v) = rs.coroot(rs.highest_root());
        assert_eq!(v, vec![1, 0, 0, 0, 0, 0, 0]);
    }
}
