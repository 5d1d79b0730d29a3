//! Weyl group elements as permutations of the root index set, with reduced
//! words, lengths, longest elements, minimal double-coset representatives,
//! and the orbit partition of perpendicular root sets.
//!
//! An element stores the image of every root index; composition is left
//! action, so `from_word(&[1,3])` is s₁s₃ acting by β ↦ s₁(s₃(β)). The
//! canonical reduced word of an element is the lexicographically least one
//! read from the left; it is what deterministic lifts ṅ_w are built from.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{ChevError, Result};
use crate::rootsys::RootSystem;

/// A Weyl group element: `perm[r]` is the index of w(root r).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeylElt {
    pub perm: Vec<u32>,
    len: u32,
}

impl WeylElt {
    pub fn identity(rs: &RootSystem) -> WeylElt {
        WeylElt { perm: (0..rs.n_roots() as u32).collect(), len: 0 }
    }

    /// The simple reflection s_i, 1-based node number.
    pub fn simple(rs: &RootSystem, i: usize) -> WeylElt {
        assert!((1..=rs.rank).contains(&i), "node {i} out of range");
        let perm: Vec<u32> = rs.simple_refl[i - 1].iter().map(|&x| x as u32).collect();
        WeylElt { perm, len: 1 }
    }

    /// Product of simple reflections for a 1-based word, left to right:
    /// `from_word(&[i1, i2, …])` = s_{i1}·s_{i2}·⋯.
    pub fn from_word(rs: &RootSystem, word: &[usize]) -> WeylElt {
        let mut w = WeylElt::identity(rs);
        for &i in word {
            w = w.postmul_simple(rs, i);
        }
        w
    }

    /// The reflection s_α for an arbitrary root index.
    pub fn reflection(rs: &RootSystem, alpha: usize) -> WeylElt {
        let perm: Vec<u32> =
            (0..rs.n_roots()).map(|r| rs.reflect(alpha, r) as u32).collect();
        let mut w = WeylElt { perm, len: 0 };
        w.len = w.count_inversions(rs);
        w
    }

    fn count_inversions(&self, rs: &RootSystem) -> u32 {
        (0..rs.n_pos).filter(|&r| !rs.is_positive(self.perm[r] as usize)).count() as u32
    }

    pub fn length(&self) -> u32 {
        self.len
    }

    pub fn is_identity(&self) -> bool {
        self.len == 0
    }

    pub fn apply(&self, r: usize) -> usize {
        self.perm[r] as usize
    }

    /// self ∘ other: (self·other)(β) = self(other(β)).
    pub fn mul(&self, rs: &RootSystem, other: &WeylElt) -> WeylElt {
        let perm: Vec<u32> = (0..self.perm.len()).map(|r| self.perm[other.perm[r] as usize]).collect();
        let mut w = WeylElt { perm, len: 0 };
        w.len = w.count_inversions(rs);
        w
    }

    pub fn inv(&self, rs: &RootSystem) -> WeylElt {
        let mut perm = vec![0u32; self.perm.len()];
        for (r, &img) in self.perm.iter().enumerate() {
            perm[img as usize] = r as u32;
        }
        let mut w = WeylElt { perm, len: 0 };
        w.len = w.count_inversions(rs);
        w
    }

    /// w·s_i (1-based i), updating the length by ±1.
    pub fn postmul_simple(&self, rs: &RootSystem, i: usize) -> WeylElt {
        assert!((1..=rs.rank).contains(&i), "node {i} out of range");
        let table = &rs.simple_refl[i - 1];
        let perm: Vec<u32> = (0..self.perm.len()).map(|r| self.perm[table[r]]).collect();
        let up = rs.is_positive(self.apply(rs.simple(i - 1)));
        WeylElt { perm, len: if up { self.len + 1 } else { self.len - 1 } }
    }

    /// s_i·w (1-based i).
    pub fn premul_simple(&self, rs: &RootSystem, i: usize) -> WeylElt {
        assert!((1..=rs.rank).contains(&i), "node {i} out of range");
        let table = &rs.simple_refl[i - 1];
        let perm: Vec<u32> = self.perm.iter().map(|&x| table[x as usize] as u32).collect();
        let up = !self.left_descent(rs, i); // ℓ(s_i w) = ℓ(w)+1 iff w⁻¹(α_i) > 0
        WeylElt { perm, len: if up { self.len + 1 } else { self.len - 1 } }
    }

    /// ℓ(s_i·w) < ℓ(w), 1-based i: w⁻¹(α_i) < 0.
    pub fn left_descent(&self, rs: &RootSystem, i: usize) -> bool {
        let si = rs.simple(i - 1);
        // w⁻¹(α_i) < 0 iff α_i = w(γ) for some negative γ.
        (rs.n_pos..2 * rs.n_pos).any(|r| self.perm[r] as usize == si)
    }

    /// ℓ(w·s_i) < ℓ(w), 1-based i: w(α_i) < 0.
    pub fn right_descent(&self, rs: &RootSystem, i: usize) -> bool {
        !rs.is_positive(self.apply(rs.simple(i - 1)))
    }

    /// The lexicographically least reduced word, read from the left
    /// (1-based letters). Deterministic; length equals ℓ(w).
    pub fn canonical_word(&self, rs: &RootSystem) -> Vec<usize> {
        let mut w = self.clone();
        let mut out = Vec::with_capacity(self.len as usize);
        while !w.is_identity() {
            let i = (1..=rs.rank)
                .find(|&i| w.left_descent(rs, i))
                .expect("nonidentity element has a left descent");
            out.push(i);
            w = w.premul_simple(rs, i);
        }
        out
    }
}

/// The longest element w₀ (all positive roots inverted).
pub fn longest_element(rs: &RootSystem) -> WeylElt {
    parabolic_longest(rs, &(1..=rs.rank).collect())
}

/// Longest element of the standard parabolic W_K, K given as 1-based nodes.
pub fn parabolic_longest(rs: &RootSystem, k: &BTreeSet<usize>) -> WeylElt {
    let mut w = WeylElt::identity(rs);
    loop {
        // w·s_i lengthens exactly while w(α_i) > 0; greedily saturate.
        match k.iter().find(|&&i| !w.right_descent(rs, i)) {
            Some(&i) => w = w.postmul_simple(rs, i),
            None => return w,
        }
    }
}

/// The minimal-length representative of the double coset W_K·w·W_K
/// (K 1-based), by descent reduction on both sides.
pub fn min_double_coset_rep(rs: &RootSystem, w: &WeylElt, k: &BTreeSet<usize>) -> WeylElt {
    let mut w = w.clone();
    loop {
        if let Some(&i) = k.iter().find(|&&i| w.left_descent(rs, i)) {
            w = w.premul_simple(rs, i);
            continue;
        }
        if let Some(&i) = k.iter().find(|&&i| w.right_descent(rs, i)) {
            w = w.postmul_simple(rs, i);
            continue;
        }
        return w;
    }
}

/// Orbit partition of the W-action on unordered sets of k mutually
/// perpendicular roots taken up to sign (each root folded to its positive
/// representative). Returns (lex-least member, orbit size) per orbit,
/// sorted by representative; the union of the orbits is checked to be
/// exactly the full collection of perpendicular k-sets.
pub fn perp_orbit_partition(rs: &RootSystem, kset: usize) -> Result<Vec<(Vec<usize>, u64)>> {
    if rs.n_pos > 64 {
        return Err(ChevError::budget(format!(
            "perp orbit partition supports ≤ 64 positive roots, {} has {}",
            rs.letter, rs.n_pos
        )));
    }
    // Perp masks over positive-root bits.
    let masks: Vec<u64> = (0..rs.n_pos)
        .map(|r| {
            let mut m = 0u64;
            for s in (r + 1)..rs.n_pos {
                if rs.pairing(s, r) == 0 {
                    m |= 1 << s;
                }
            }
            m
        })
        .collect();
    // Enumerate all perpendicular k-subsets of positive roots.
    let mut all: Vec<Vec<u16>> = Vec::new();
    let mut stack: Vec<(Vec<u16>, u64)> = (0..rs.n_pos)
        .map(|r| (vec![r as u16], masks[r]))
        .collect();
    while let Some((tuple, avail)) = stack.pop() {
        if tuple.len() == kset {
            all.push(tuple);
            continue;
        }
        let mut m = avail;
        while m != 0 {
            let r = m.trailing_zeros() as usize;
            m &= m - 1;
            let mut t = tuple.clone();
            t.push(r as u16);
            stack.push((t, avail & masks[r]));
        }
    }

    let fold = |r: usize| -> u16 {
        (if rs.is_positive(r) { r } else { rs.neg(r) }) as u16
    };
    let mut visited: HashSet<Vec<u16>> = HashSet::new();
    let mut orbits: Vec<(Vec<usize>, u64)> = Vec::new();
    for seed in &all {
        if visited.contains(seed) {
            continue;
        }
        let mut size = 0u64;
        let mut queue = vec![seed.clone()];
        visited.insert(seed.clone());
        let mut least = seed.clone();
        while let Some(t) = queue.pop() {
            size += 1;
            if t < least {
                least = t.clone();
            }
            for i in 0..rs.rank {
                let mut img: Vec<u16> =
                    t.iter().map(|&r| fold(rs.simple_refl[i][r as usize])).collect();
                img.sort_unstable();
                if visited.insert(img.clone()) {
                    queue.push(img);
                }
            }
        }
        orbits.push((least.iter().map(|&x| x as usize).collect(), size));
    }
    // Every enumerated set was visited by exactly one orbit.
    let total: u64 = orbits.iter().map(|(_, s)| s).sum();
    assert_eq!(total as usize, all.len(), "orbit partition must cover all perp sets");
    orbits.sort();
    Ok(orbits)
}

/// Group order by orbit-stabilizer chains is overkill at this scale; the
/// small groups used for cross-checks are enumerated directly.
pub fn enumerate_group(rs: &RootSystem, budget: usize) -> Result<Vec<WeylElt>> {
    let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
    let id = WeylElt::identity(rs);
    seen.insert(id.perm.clone(), 0);
    let mut out = vec![id];
    let mut head = 0;
    while head < out.len() {
        let w = out[head].clone();
        head += 1;
        for i in 1..=rs.rank {
            let next = w.postmul_simple(rs, i);
            if !seen.contains_key(&next.perm) {
                if out.len() >= budget {
                    return Err(ChevError::budget(format!(
                        "Weyl group enumeration exceeded budget {budget}"
                    )));
                }
                seen.insert(next.perm.clone(), out.len() as u32);
                out.push(next);
            }
        }
    }
    Ok(out)
}
