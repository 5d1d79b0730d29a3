//! Opposition diagrams, Ψ_J perpendicular-root subsystems, chamber
//! displacement, and exhaustive displacement spectra over small finite
//! fields.  The spectra enumerate every chamber of the q-analogue building
//! cell by cell, so domesticity and circled-node questions are settled by
//! exact counting rather than sampling; the companion `corpus` submodule
//! replays the E7 conjugation arguments claim by claim.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::chevalley::{GroupCtx, GroupElt};
use crate::error::{ChevError, Result};
use crate::field::Scalar;
use crate::rootsys::RootSystem;
use crate::weyl::{enumerate_group, longest_element, min_double_coset_rep, parabolic_longest, WeylElt};

mod corpus;
pub use corpus::verify_corpus;

/// The diagram involution σ with w₀(α_i) = −α_{σ(i)}, as a 1-based table:
/// entry `i − 1` holds σ(i).
pub fn opposition_involution(rs: &RootSystem) -> Vec<usize> {
    let w0 = longest_element(rs);
    (1..=rs.rank)
        .map(|i| {
            let img = rs.neg(w0.apply(rs.simple(i - 1)));
            (1..=rs.rank)
                .find(|&j| rs.simple(j - 1) == img)
                .expect("w0 permutes the simple roots up to sign")
        })
        .collect()
}

/// ℓ(w_{S∖J}·w₀) = ℓ(w₀) − ℓ(w_{S∖J}) for a 1-based node set J: the
/// displacement ceiling attached to the diagram with circled nodes J.
pub fn quotient_length(rs: &RootSystem, j: &BTreeSet<usize>) -> u32 {
    let rest: BTreeSet<usize> = (1..=rs.rank).filter(|i| !j.contains(i)).collect();
    longest_element(rs).length() - parabolic_longest(rs, &rest).length()
}

/// A named opposition diagram: its circled nodes J, the sequence of
/// mutually perpendicular highest roots φ_1, …, φ_N produced by iterated
/// polar-node removal, and the ceiling M = ℓ(w_{S∖J}w₀) on chamber
/// displacement.
#[derive(Clone, Debug)]
pub struct OppDiagram {
    pub name: String,
    pub j: BTreeSet<usize>,
    pub sequence: Vec<usize>,
    pub m: u32,
}

impl OppDiagram {
    pub fn named(rs: &RootSystem, name: &str) -> Result<OppDiagram> {
        let j = rs.diagram_nodes(name)?;
        let sequence = rs.highest_root_sequence(name)?;
        let sigma = opposition_involution(rs);
        for &i in &j {
            if !j.contains(&sigma[i - 1]) {
                return Err(ChevError::finding(
                    name,
                    format!("circled set {j:?} is not stable under the opposition involution"),
                ));
            }
        }
        for (a, &x) in sequence.iter().enumerate() {
            for &y in &sequence[a + 1..] {
                if rs.pairing(x, y) != 0 {
                    return Err(ChevError::finding(
                        name,
                        format!("sequence roots {} and {} are not perpendicular", rs.root(x), rs.root(y)),
                    ));
                }
            }
        }
        let m = quotient_length(rs, &j);
        Ok(OppDiagram { name: name.to_string(), j, sequence, m })
    }
}

/// The subsystem Ψ_J = {β ∈ Φ : ⟨α, β∨⟩ = 0 for all α ∈ Φ_{S∖J}}, with an
/// identified simple system and Cartan type.  Root entries are indices
/// into the ambient system.
#[derive(Clone, Debug)]
pub struct PsiSystem {
    pub roots: Vec<usize>,
    pub positives: Vec<usize>,
    pub simples: Vec<usize>,
    pub cartan_type: String,
}

/// Compute Ψ_J for a 1-based circled-node set J.  Orthogonality to the
/// simple roots of S∖J suffices since they span Φ_{S∖J}.
pub fn psi_j(rs: &RootSystem, j: &BTreeSet<usize>) -> PsiSystem {
    let rest: Vec<usize> = (1..=rs.rank).filter(|i| !j.contains(i)).map(|i| rs.simple(i - 1)).collect();
    let positives: Vec<usize> =
        (0..rs.n_pos).filter(|&r| rest.iter().all(|&a| rs.pairing(r, a) == 0)).collect();
    let roots: Vec<usize> =
        positives.iter().copied().chain(positives.iter().map(|&r| rs.neg(r))).collect();
    // Simple roots of Ψ: positives that are not sums of two positives of Ψ.
    let simples: Vec<usize> = positives
        .iter()
        .copied()
        .filter(|&r| {
            !positives
                .iter()
                .any(|&p| positives.iter().any(|&s| rs.add_roots(p, s) == Some(r)))
        })
        .collect();
    let cartan_type = classify_simples(rs, &simples);
    PsiSystem { roots, positives, simples, cartan_type }
}

/// Name the Cartan type of a set of simple roots by component shape:
/// chains are A_n, the rank-4 star is D4, anything else is reported
/// descriptively rather than guessed.
fn classify_simples(rs: &RootSystem, simples: &[usize]) -> String {
    if simples.is_empty() {
        return "empty".to_string();
    }
    let n = simples.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&k| k != i && rs.pairing(simples[i], simples[k]) != 0).collect())
        .collect();
    let mut seen = vec![false; n];
    let mut names: Vec<String> = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < comp.len() {
            let v = comp[head];
            head += 1;
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
        }
        let degrees: Vec<usize> = {
            let mut d: Vec<usize> = comp.iter().map(|&v| adj[v].len()).collect();
            d.sort_unstable();
            d
        };
        let rank = comp.len();
        let name = if rank == 1 {
            "A1".to_string()
        } else if degrees.iter().all(|&d| d <= 2) && degrees.iter().filter(|&&d| d == 1).count() == 2 {
            format!("A{rank}")
        } else if rank == 4 && degrees == vec![1, 1, 1, 3] {
            "D4".to_string()
        } else {
            format!("unrecognised-rank-{rank}")
        };
        names.push(name);
    }
    names.sort_by(|a, b| b.cmp(a));
    names.join("×")
}

/// The Weyl displacement δ(gB, θ·gB): the Bruhat cell of g⁻¹θg.  Both
/// elements must live in the same group.
pub fn displacement(theta: &GroupElt, g: &GroupElt) -> Result<WeylElt> {
    let (a, b) = (theta.ctx(), g.ctx());
    if a.rs.letter != b.rs.letter || a.rs.rank != b.rs.rank || a.field != b.field {
        return Err(ChevError::usage(format!(
            "displacement needs both elements in one group: {}{} over {} versus {}{} over {}",
            a.rs.letter, a.rs.rank, a.field, b.rs.letter, b.rs.rank, b.field
        )));
    }
    Ok(theta.conjugate(g).bruhat_cell().clone())
}

/// Ceiling on brute-force spectra: chamber counts past this are refused
/// rather than attempted.
pub const DEFAULT_CHAMBER_BUDGET: u64 = 10_000_000;

/// Reflection degrees d_1, …, d_n; the chamber count of the q-analogue
/// building is Π_i (q^{d_i} − 1)/(q − 1).
fn weyl_degrees(letter: char, rank: usize) -> Option<Vec<u64>> {
    let v: Vec<u64> = match (letter, rank) {
        ('A', n) if n >= 1 => (2..=n as u64 + 1).collect(),
        ('B', n) | ('C', n) if n >= 2 => (1..=n as u64).map(|i| 2 * i).collect(),
        ('D', n) if n >= 3 => {
            let mut v: Vec<u64> = (1..n as u64).map(|i| 2 * i).collect();
            v.push(n as u64);
            v
        }
        ('E', 6) => vec![2, 5, 6, 8, 9, 12],
        ('E', 7) => vec![2, 6, 8, 10, 12, 14, 18],
        ('E', 8) => vec![2, 8, 12, 14, 18, 20, 24, 30],
        ('F', 4) => vec![2, 6, 8, 12],
        ('G', 2) => vec![2, 6],
        _ => return None,
    };
    Some(v)
}

/// Exact chamber count Σ_w q^{ℓ(w)} via the degree product; None on
/// unknown type or overflow.
fn chamber_count(letter: char, rank: usize, q: u64) -> Option<u128> {
    let mut total: u128 = 1;
    for d in weyl_degrees(letter, rank)? {
        let mut cell: u128 = 0;
        let mut pw: u128 = 1;
        for _ in 0..d {
            cell = cell.checked_add(pw)?;
            pw = pw.checked_mul(q as u128)?;
        }
        total = total.checked_mul(cell)?;
    }
    Some(total)
}

/// One occurring displacement: canonical word, length, and how many
/// chambers realize it.
#[derive(Clone, Debug, Serialize)]
pub struct DisplacementEntry {
    pub word: Vec<usize>,
    pub length: u32,
    pub chambers: u64,
}

/// Exact displacement census of one group element acting on its building.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub group: String,
    pub q: u64,
    pub total_chambers: u64,
    pub fixed_chambers: u64,
    /// Occurring displacements sorted by (length, word).
    pub entries: Vec<DisplacementEntry>,
    pub max_length: u32,
    pub max_words: Vec<Vec<usize>>,
    /// No chamber is mapped to an opposite chamber.
    pub domestic: bool,
    /// Nodes i such that some simplex of type {i, σ(i)} is mapped to an
    /// opposite simplex, decided per type from the occurring displacements.
    pub circled: Vec<usize>,
    /// Circled nodes read off the unique maximal displacement when it has
    /// the shape w_{S∖J}w₀ with J stable under σ; only claimed for q ≥ 3.
    pub inferred: Option<Vec<usize>>,
    /// q = 2 spectra carry this stamp: the unique-maximum inference is
    /// unsound there, so `inferred` stays empty.
    pub uncapped_risk: bool,
}

impl SpectrumReport {
    /// Chamber count at one displacement word (0 if absent).
    pub fn count_of(&self, word: &[usize]) -> u64 {
        self.entries.iter().find(|e| e.word == word).map_or(0, |e| e.chambers)
    }
}

struct Cell {
    roots: Vec<usize>,
    lift: GroupElt,
    lift_inv: GroupElt,
    tuples: u64,
}

/// Exhaustively compute δ(gB, θ·gB) for every chamber gB.  Chambers are
/// enumerated per Bruhat cell as g = x_{β_1}(c_1)⋯x_{β_ℓ}(c_ℓ)·ṅ_w with
/// Φ(w) = {β_1 < ⋯ < β_ℓ} and coefficient tuples in base-q order, so any
/// failure index identifies its chamber exactly; cells are split into
/// fixed-size ranges and merged by addition, which keeps the result
/// independent of worker scheduling.
pub fn spectrum_bruteforce(theta: &GroupElt, budget: u64) -> Result<SpectrumReport> {
    let ctx = theta.ctx().clone();
    let rs = ctx.rs.clone();
    let q = ctx
        .field
        .cardinality()
        .ok_or_else(|| ChevError::usage("displacement spectra need a finite coefficient field"))?;
    let total = chamber_count(rs.letter, rs.rank, q)
        .filter(|&t| t <= budget as u128)
        .ok_or_else(|| {
            ChevError::budget(format!(
                "chamber count of {}{} over F_{q} exceeds the budget of {budget}",
                rs.letter, rs.rank
            ))
        })?;
    let elems = ctx.field.elements();
    let welts = enumerate_group(&rs, total as usize)?;
    let words: Vec<Vec<usize>> = welts.iter().map(|w| w.canonical_word(&rs)).collect();
    let mut order: Vec<usize> = (0..welts.len()).collect();
    order.sort_by(|&a, &b| {
        (welts[a].length(), &words[a]).cmp(&(welts[b].length(), &words[b]))
    });
    let windex: HashMap<WeylElt, usize> =
        welts.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();

    let cells: Vec<Cell> = order
        .iter()
        .map(|&i| {
            let winv = welts[i].inv(&rs);
            let roots: Vec<usize> =
                (0..rs.n_pos).filter(|&r| !rs.is_positive(winv.apply(r))).collect();
            debug_assert_eq!(roots.len(), welts[i].length() as usize);
            let lift = ctx.elt_n(&words[i]);
            let lift_inv = lift.inverse();
            let tuples = (q as u128).pow(roots.len() as u32) as u64;
            Cell { roots, lift, lift_inv, tuples }
        })
        .collect();

    const CHUNK: u64 = 1 << 15;
    let mut units: Vec<(usize, u64, u64)> = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        let mut lo = 0;
        while lo < cell.tuples {
            let hi = (lo + CHUNK).min(cell.tuples);
            units.push((ci, lo, hi));
            lo = hi;
        }
    }
    let counts: Vec<u64> = units
        .par_iter()
        .map(|&(ci, lo, hi)| spectrum_chunk(theta, &ctx, &cells[ci], &elems, lo, hi, &windex))
        .reduce(
            || vec![0u64; welts.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let processed: u128 = counts.iter().map(|&c| c as u128).sum();
    if processed != total {
        return Err(ChevError::finding(
            "chamber census",
            format!("enumerated {processed} chambers but the degree product gives {total}"),
        ));
    }

    let entries: Vec<DisplacementEntry> = order
        .iter()
        .filter(|&&i| counts[i] > 0)
        .map(|&i| DisplacementEntry {
            word: words[i].clone(),
            length: welts[i].length(),
            chambers: counts[i],
        })
        .collect();
    let w0 = longest_element(&rs);
    let identity = WeylElt::identity(&rs);
    let fixed_chambers = counts[windex[&identity]];
    let domestic = counts[windex[&w0]] == 0;
    let max_length = entries.iter().map(|e| e.length).max().unwrap_or(0);
    let max_words: Vec<Vec<usize>> =
        entries.iter().filter(|e| e.length == max_length).map(|e| e.word.clone()).collect();

    let occurring: Vec<&WeylElt> =
        (0..welts.len()).filter(|&i| counts[i] > 0).map(|i| &welts[i]).collect();
    let sigma = opposition_involution(&rs);
    let circled = circled_nodes(&rs, &sigma, &w0, &occurring);
    let uncapped_risk = q == 2;
    let inferred = if q >= 3 && max_words.len() == 1 {
        infer_circled(&rs, &sigma, &w0, occurring.iter().find(|w| w.length() == max_length).unwrap())
    } else {
        None
    };
    if let Some(j) = &inferred {
        let direct: Vec<usize> = circled.iter().copied().collect();
        if *j != direct {
            return Err(ChevError::finding(
                "capped inference",
                format!(
                    "maximal displacement implies circled nodes {j:?}, direct per-type testing gives {direct:?}"
                ),
            ));
        }
    }

    Ok(SpectrumReport {
        group: format!("{}{} over F_{q}", rs.letter, rs.rank),
        q,
        total_chambers: total as u64,
        fixed_chambers,
        entries,
        max_length,
        max_words,
        domestic,
        circled: circled.into_iter().collect(),
        inferred,
        uncapped_risk,
    })
}

/// Conjugation census over one coefficient range of one cell.  The inner
/// element prefix_k⁻¹·θ·prefix_k is cached per tuple position, so stepping
/// the base-q odometer only redoes the positions that changed.
fn spectrum_chunk(
    theta: &GroupElt,
    ctx: &GroupCtx,
    cell: &Cell,
    elems: &[Scalar],
    lo: u64,
    hi: u64,
    windex: &HashMap<WeylElt, usize>,
) -> Vec<u64> {
    let q = elems.len() as u64;
    let l = cell.roots.len();
    let mut counts = vec![0u64; windex.len()];
    let mut digits = vec![0usize; l];
    let mut t = lo;
    for k in (0..l).rev() {
        digits[k] = (t % q) as usize;
        t /= q;
    }
    let mut conj: Vec<GroupElt> = Vec::with_capacity(l + 1);
    conj.push(theta.clone());
    for k in 0..l {
        let next = conj_step(ctx, &conj[k], cell.roots[k], &elems[digits[k]]);
        conj.push(next);
    }
    let mut idx = lo;
    loop {
        let inner = cell.lift_inv.multiply(&conj[l]).multiply(&cell.lift);
        counts[windex[inner.bruhat_cell()]] += 1;
        idx += 1;
        if idx >= hi {
            break;
        }
        let mut k = l;
        loop {
            k -= 1;
            if digits[k] + 1 < q as usize {
                digits[k] += 1;
                for d in digits[k + 1..].iter_mut() {
                    *d = 0;
                }
                break;
            }
        }
        conj.truncate(k + 1);
        for j in k..l {
            let next = conj_step(ctx, &conj[j], cell.roots[j], &elems[digits[j]]);
            conj.push(next);
        }
    }
    counts
}

fn conj_step(ctx: &GroupCtx, inner: &GroupElt, root: usize, c: &Scalar) -> GroupElt {
    if c.is_zero() {
        return inner.clone();
    }
    let x = ctx.elt_x(root, c);
    ctx.elt_x(root, &c.neg()).multiply(inner).multiply(&x)
}

/// Per-type opposition testing: node i is circled when some occurring
/// displacement lies in the W_K-double coset of w₀ for K = S∖{i, σ(i)} —
/// exactly the condition for a type-{i, σ(i)} simplex in a chamber at that
/// displacement to land on an opposite simplex.
fn circled_nodes(
    rs: &RootSystem,
    sigma: &[usize],
    w0: &WeylElt,
    occurring: &[&WeylElt],
) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for i in 1..=rs.rank {
        let k: BTreeSet<usize> =
            (1..=rs.rank).filter(|&n| n != i && n != sigma[i - 1]).collect();
        let target = min_double_coset_rep(rs, w0, &k);
        if occurring.iter().any(|w| min_double_coset_rep(rs, w, &k) == target) {
            out.insert(i);
            out.insert(sigma[i - 1]);
        }
    }
    out
}

/// Read J off a unique maximal displacement of the shape w_{S∖J}w₀, the
/// signature of a capped automorphism; None when the shape does not match.
fn infer_circled(
    rs: &RootSystem,
    sigma: &[usize],
    w0: &WeylElt,
    w_max: &WeylElt,
) -> Option<Vec<usize>> {
    let v = w_max.mul(rs, w0);
    let k: BTreeSet<usize> = (1..=rs.rank).filter(|&i| v.right_descent(rs, i)).collect();
    if v != parabolic_longest(rs, &k) {
        return None;
    }
    let j: Vec<usize> = (1..=rs.rank).filter(|i| !k.contains(i)).collect();
    if j.iter().any(|&i| !j.contains(&sigma[i - 1])) {
        return None;
    }
    Some(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use std::sync::Arc;

    fn group(letter: char, rank: usize, p: u64) -> GroupCtx {
        let rs = Arc::new(RootSystem::build(letter, rank).unwrap());
        GroupCtx::new(rs, Field::prime(p).unwrap()).unwrap()
    }

    #[test]
    fn involution_is_read_off_w0() {
        let a3 = RootSystem::build('A', 3).unwrap();
        assert_eq!(opposition_involution(&a3), vec![3, 2, 1]);
        let a2 = RootSystem::build('A', 2).unwrap();
        assert_eq!(opposition_involution(&a2), vec![2, 1]);
        let d4 = RootSystem::build('D', 4).unwrap();
        assert_eq!(opposition_involution(&d4), vec![1, 2, 3, 4]);
        let e7 = RootSystem::build('E', 7).unwrap();
        assert_eq!(opposition_involution(&e7), vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn named_diagrams_carry_their_ceilings() {
        let rs = RootSystem::build('E', 7).unwrap();
        let expected = [("E7;1", 33), ("E7;2", 50), ("E7;3", 51), ("E7;4", 60)];
        for (name, m) in expected {
            let d = OppDiagram::named(&rs, name).unwrap();
            assert_eq!(d.m, m, "{name}");
            assert_eq!(d.sequence.len(), d.j.len(), "{name}: one φ per consumed circle pair");
        }
        match OppDiagram::named(&rs, "E7;9") {
            Err(ChevError::Usage(_)) => {}
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn psi_systems_of_the_four_diagrams() {
        let rs = RootSystem::build('E', 7).unwrap();
        let phi_e7 = rs.highest_root();
        let phi_d6 = rs.expect_root(&[0, 1, 1, 2, 2, 2, 1]);
        let phi_d4 = rs.expect_root(&[0, 1, 1, 2, 1, 0, 0]);

        let p1 = psi_j(&rs, &[1].into());
        assert_eq!(p1.cartan_type, "A1");
        assert_eq!(p1.positives, vec![phi_e7]);

        let p3 = psi_j(&rs, &[1, 6, 7].into());
        assert_eq!(p3.cartan_type, "A1×A1×A1");
        let expect3: BTreeSet<usize> = [phi_e7, phi_d6, rs.simple(6)].into();
        assert_eq!(p3.positives.iter().copied().collect::<BTreeSet<_>>(), expect3);
        assert_eq!(p3.simples.iter().copied().collect::<BTreeSet<_>>(), expect3);

        let p4 = psi_j(&rs, &[1, 3, 4, 6].into());
        assert_eq!(p4.cartan_type, "D4");
        assert_eq!(p4.positives.len(), 12);
        let expect4: BTreeSet<usize> = [phi_d6, rs.simple(0), phi_d4, rs.simple(2)].into();
        assert_eq!(p4.simples.iter().copied().collect::<BTreeSet<_>>(), expect4);

        let empty = psi_j(&rs, &BTreeSet::new());
        assert_eq!(empty.cartan_type, "empty");
        assert!(empty.roots.is_empty());
    }

    #[test]
    fn displacement_of_borel_elements_and_rank_one_cells() {
        let ctx = group('A', 2, 5);
        let rs = ctx.rs.clone();
        let phi = rs.highest_root();
        let two = ctx.field.from_int(2);
        // An element of B fixes the base chamber.
        let b = ctx
            .elt_x(0, &two)
            .multiply(&ctx.elt_h_coroot(phi, &two).unwrap())
            .multiply(&ctx.elt_x(phi, &two));
        assert!(displacement(&b, &ctx.identity()).unwrap().is_identity());
        // …and moves the opposite chamber ṅ_{w₀}B back across the cell of x_{−φ}.
        let down = ctx.elt_x(rs.neg(phi), &ctx.field.one());
        let delta = displacement(&down, &ctx.identity()).unwrap();
        assert_eq!(delta, WeylElt::reflection(&rs, phi));

        let other = group('A', 3, 5);
        match displacement(&b, &other.identity()) {
            Err(ChevError::Usage(_)) => {}
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn a1_spectrum_counts_the_projective_line() {
        let ctx = group('A', 1, 2);
        let theta = ctx.elt_x(0, &ctx.field.one());
        let rep = spectrum_bruteforce(&theta, DEFAULT_CHAMBER_BUDGET).unwrap();
        assert_eq!(rep.total_chambers, 3);
        assert_eq!(rep.fixed_chambers, 1);
        assert_eq!(rep.count_of(&[]), 1);
        assert_eq!(rep.count_of(&[1]), 2);
        assert!(!rep.domestic);
        assert_eq!(rep.circled, vec![1]);
        assert!(rep.uncapped_risk);
    }

    #[test]
    fn a2_spectrum_of_a_central_elation() {
        // Over F₂ the elation x_φ(1) of the Fano plane fixes the five flags
        // through its centre/axis and moves four flags point-wise, four
        // line-wise; projective-plane collineations are never domestic.
        let ctx = group('A', 2, 2);
        let theta = ctx.elt_x(ctx.rs.highest_root(), &ctx.field.one());
        let rep = spectrum_bruteforce(&theta, DEFAULT_CHAMBER_BUDGET).unwrap();
        assert_eq!(rep.total_chambers, 21);
        assert_eq!(rep.fixed_chambers, 5);
        assert_eq!(rep.count_of(&[1]), 4);
        assert_eq!(rep.count_of(&[2]), 4);
        assert!(!rep.domestic);
        assert_eq!(rep.circled, vec![1, 2]);
        assert_eq!(rep.inferred, None);
    }

    #[test]
    fn a3_unipotent_spectrum_is_domestic_with_ends_circled() {
        let ctx = group('A', 3, 2);
        let rs = ctx.rs.clone();
        let theta = ctx.elt_x(rs.highest_root(), &ctx.field.one());
        let rep = spectrum_bruteforce(&theta, DEFAULT_CHAMBER_BUDGET).unwrap();
        assert_eq!(rep.total_chambers, 315);
        assert!(rep.domestic);
        assert_eq!(rep.circled, vec![1, 3]);
        // The ceiling for circled nodes {1,3}: ℓ(w_{{2}}w₀) = 5, attained
        // exactly at s₂w₀.
        assert_eq!(quotient_length(&rs, &[1, 3].into()), 5);
        assert_eq!(rep.max_length, 5);
        let s2w0 = WeylElt::simple(&rs, 2).mul(&rs, &longest_element(&rs));
        assert_eq!(rep.max_words, vec![s2w0.canonical_word(&rs)]);
    }

    #[test]
    fn a3_homology_spectrum_respects_the_same_ceiling() {
        let ctx = group('A', 3, 3);
        let rs = ctx.rs.clone();
        let minus = ctx.field.from_int(-1);
        let theta = ctx.elt_h(&crate::rootsys::Coweight(vec![1, 0, 0]), &minus).unwrap();
        let rep = spectrum_bruteforce(&theta, DEFAULT_CHAMBER_BUDGET).unwrap();
        assert!(rep.domestic);
        assert_eq!(rep.circled, vec![1, 3]);
        assert!(rep.max_length <= 5);
        assert_eq!(rep.inferred, Some(vec![1, 3]));
    }

    #[test]
    fn a3_mixed_element_is_not_domestic() {
        let ctx = group('A', 3, 3);
        let rs = ctx.rs.clone();
        let phi = rs.highest_root();
        let theta = ctx
            .elt_x(phi, &ctx.field.one())
            .multiply(&ctx.elt_h_coroot(phi, &ctx.field.from_int(-1)).unwrap());
        let rep = spectrum_bruteforce(&theta, DEFAULT_CHAMBER_BUDGET).unwrap();
        assert_eq!(rep.total_chambers, 2080);
        assert!(!rep.domestic);
        assert_eq!(rep.inferred, Some(vec![1, 2, 3]));
        assert_eq!(rep.circled, vec![1, 2, 3]);
    }

    #[test]
    fn spectrum_budget_and_field_guards() {
        let ctx = group('A', 3, 3);
        let theta = ctx.identity();
        match spectrum_bruteforce(&theta, 100) {
            Err(ChevError::Budget(_)) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
        let rs = Arc::new(RootSystem::build('A', 2).unwrap());
        let rational = GroupCtx::new(rs, Field::rationals()).unwrap();
        match spectrum_bruteforce(&rational.identity(), 100) {
            Err(ChevError::Usage(_)) => {}
            other => panic!("expected usage error, got {other:?}"),
        }
    }
}
