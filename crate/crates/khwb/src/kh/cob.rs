//! Dotted-cobordism arithmetic between planar matchings, over the
//! two-element field.
//!
//! After delooping, scan objects are crossingless tangles: perfect matchings
//! of the boundary points. A morphism between two matchings on the same
//! boundary is a sum of dotted surfaces; neck-cutting reduces every surface
//! to the disjoint union of genus-zero pieces over the *overlay cycles* of
//! source and target (each boundary point carries one source arc and one
//! target arc, so the union of both matchings decomposes into alternating
//! cycles). A basis term is therefore just a dot mask over those cycles.
//! Relations used: two dots kill a component, any positive-genus component
//! is zero (a handle cuts into twice a dot), an undotted sphere is zero and
//! a once-dotted sphere is one.

use smallvec::SmallVec;

/// Perfect matching as a partner array: `m[p]` is the point paired with `p`.
pub type Matching = Vec<u8>;

/// Sum of dotted-cobordism basis terms: sorted, duplicate-free dot masks
/// over the overlay cycles of the (source, target) pair.
pub type CobSum = SmallVec<[u16; 4]>;

/// XOR a mask into a sum, keeping it sorted and duplicate-free.
pub fn xor_term(sum: &mut CobSum, mask: u16) {
    match sum.binary_search(&mask) {
        Ok(pos) => {
            sum.remove(pos);
        }
        Err(pos) => sum.insert(pos, mask),
    }
}

pub fn xor_sum(sum: &mut CobSum, other: &CobSum) {
    for &m in other {
        xor_term(sum, m);
    }
}

/// Overlay cycles of two matchings on the same boundary: cycle index per
/// point, cycles ordered by their smallest point. Returns the count.
pub fn overlay_cycles(m1: &Matching, m2: &Matching, cycle_of_point: &mut Vec<u8>) -> usize {
    let n = m1.len();
    debug_assert_eq!(n, m2.len());
    cycle_of_point.clear();
    cycle_of_point.resize(n, u8::MAX);
    let mut count = 0usize;
    for start in 0..n {
        if cycle_of_point[start] != u8::MAX {
            continue;
        }
        let mut p = start;
        loop {
            cycle_of_point[p] = count as u8;
            let q = m1[p] as usize;
            cycle_of_point[q] = count as u8;
            p = m2[q] as usize;
            if p == start {
                break;
            }
        }
        count += 1;
    }
    count
}

/// The identity morphism on a matching.
pub fn identity(_m: &Matching) -> CobSum {
    let mut s = CobSum::new();
    xor_term(&mut s, 0);
    s
}

/// Expansion of one connected genus-zero component into canonical terms:
/// with a dot every overlay cycle in the component is dotted; without, each
/// term leaves exactly one cycle undotted.
pub(crate) fn component_masks(cycles: &[u16], dots: u32, out: &mut SmallVec<[u16; 8]>) {
    out.clear();
    let full: u16 = cycles.iter().fold(0, |acc, &c| acc | 1 << c);
    match dots {
        0 => {
            for &c in cycles {
                out.push(full & !(1 << c));
            }
        }
        1 => out.push(full),
        _ => {}
    }
}

/// Composite structure of two morphisms, independent of dot placement.
struct ComposeGeometry {
    /// per component: output overlay(m1,m3) cycles, f-cycles, g-cycles
    comps: Vec<(SmallVec<[u16; 8]>, SmallVec<[u16; 8]>, SmallVec<[u16; 8]>)>,
    all_genus_zero: bool,
}

fn compose_geometry(m1: &Matching, m2: &Matching, m3: &Matching) -> ComposeGeometry {
    let n = m1.len();
    let mut f_cycle = Vec::new();
    let f_count = overlay_cycles(m1, m2, &mut f_cycle);
    let mut g_cycle = Vec::new();
    let g_count = overlay_cycles(m2, m3, &mut g_cycle);
    let mut out_cycle = Vec::new();
    let out_count = overlay_cycles(m1, m3, &mut out_cycle);

    // union-find over f-pieces (0..f_count) and g-pieces (f_count..)
    let total = f_count + g_count;
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let nx = parent[c];
            parent[c] = r;
            c = nx;
        }
        r
    }
    // middle arcs glue f-piece to g-piece
    for p in 0..n {
        let q = m2[p] as usize;
        if p < q {
            let a = f_cycle[p] as usize;
            let b = f_count + g_cycle[p] as usize;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut comp_index = vec![usize::MAX; total];
    let mut comps: Vec<(SmallVec<[u16; 8]>, SmallVec<[u16; 8]>, SmallVec<[u16; 8]>)> = Vec::new();
    let mut pieces_in: Vec<i64> = Vec::new();
    let mut points_in: Vec<i64> = Vec::new();
    for piece in 0..total {
        let root = find(&mut parent, piece);
        if comp_index[root] == usize::MAX {
            comp_index[root] = comps.len();
            comps.push((SmallVec::new(), SmallVec::new(), SmallVec::new()));
            pieces_in.push(0);
            points_in.push(0);
        }
        let idx = comp_index[root];
        pieces_in[idx] += 1;
        if piece < f_count {
            comps[idx].1.push(piece as u16);
        } else {
            comps[idx].2.push((piece - f_count) as u16);
        }
    }
    for p in 0..n {
        let idx = comp_index[find(&mut parent, f_cycle[p] as usize)];
        points_in[idx] += 1;
    }
    for c in 0..out_count {
        let p = out_cycle.iter().position(|&x| x as usize == c).unwrap();
        let idx = comp_index[find(&mut parent, f_cycle[p] as usize)];
        comps[idx].0.push(c as u16);
    }
    // chi = pieces - points/2; 2 genus = 2 - boundary - chi
    let mut all_genus_zero = true;
    for (idx, comp) in comps.iter().enumerate() {
        let chi = pieces_in[idx] - points_in[idx] / 2;
        let b = comp.0.len() as i64;
        let two_g = 2 - b - chi;
        debug_assert!(two_g >= 0 && two_g % 2 == 0, "broken Euler characteristic");
        if two_g != 0 {
            all_genus_zero = false;
        }
    }
    ComposeGeometry { comps, all_genus_zero }
}

/// Compose morphisms f: m1 -> m2 and g: m2 -> m3.
pub fn compose(m1: &Matching, m2: &Matching, m3: &Matching, f: &CobSum, g: &CobSum) -> CobSum {
    let mut out = CobSum::new();
    if f.is_empty() || g.is_empty() {
        return out;
    }
    if m1.is_empty() && m2.is_empty() && m3.is_empty() {
        // scalar product; each sum is either empty or the single mask 0
        if f.len() == 1 && g.len() == 1 {
            xor_term(&mut out, 0);
        }
        return out;
    }
    let geom = compose_geometry(m1, m2, m3);
    if !geom.all_genus_zero {
        return out;
    }
    let mut scratch: SmallVec<[u16; 8]> = SmallVec::new();
    for &fm in f {
        'terms: for &gm in g {
            let mut partial: SmallVec<[u16; 8]> = SmallVec::new();
            partial.push(0);
            for (out_cycles, f_cycles, g_cycles) in &geom.comps {
                let mut dots = 0u32;
                for &fc in f_cycles {
                    if fm >> fc & 1 == 1 {
                        dots += 1;
                    }
                }
                for &gc in g_cycles {
                    if gm >> gc & 1 == 1 {
                        dots += 1;
                    }
                }
                if out_cycles.is_empty() {
                    // closed component: sphere evaluation
                    if dots != 1 {
                        continue 'terms;
                    }
                    continue;
                }
                component_masks(out_cycles, dots, &mut scratch);
                if scratch.is_empty() {
                    continue 'terms;
                }
                let mut next: SmallVec<[u16; 8]> = SmallVec::new();
                for &base in &partial {
                    for &add in &scratch {
                        next.push(base | add);
                    }
                }
                partial = next;
            }
            for &mask in &partial {
                xor_term(&mut out, mask);
            }
        }
    }
    out
}

/// Whether an endomorphism sum contains the undotted identity.
pub fn is_invertible(f: &CobSum) -> bool {
    f.binary_search(&0).is_ok()
}

/// Inverse of `id + n` with `n` nilpotent: the Neumann series.
pub fn invert(m: &Matching, f: &CobSum) -> Option<CobSum> {
    if !is_invertible(f) {
        return None;
    }
    let mut nil = f.clone();
    xor_term(&mut nil, 0); // n = f - id
    let mut inv = identity(m);
    let mut term = nil.clone();
    let mut guard = 0;
    while !term.is_empty() {
        xor_sum(&mut inv, &term);
        term = compose(m, m, m, &term, &nil);
        guard += 1;
        assert!(guard <= 64, "non-nilpotent correction in invert");
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matching(pairs: &[(u8, u8)]) -> Matching {
        let n = pairs.len() * 2;
        let mut m = vec![0u8; n];
        for &(a, b) in pairs {
            m[a as usize] = b;
            m[b as usize] = a;
        }
        m
    }

    #[test]
    fn identity_composes() {
        let m = matching(&[(0, 1), (2, 3)]);
        let id = identity(&m);
        let c = compose(&m, &m, &m, &id, &id);
        assert_eq!(c, id);
    }

    #[test]
    fn neck_cut_tube() {
        // saddle down then saddle up passes through the crosswise matching
        // and neck-cuts into dot-left + dot-right
        let h = matching(&[(0, 1), (2, 3)]);
        let v = matching(&[(0, 3), (1, 2)]);
        let mut f = CobSum::new();
        xor_term(&mut f, 0);
        let g = f.clone();
        let c = compose(&h, &v, &h, &f, &g);
        assert_eq!(c.as_slice(), &[0b01, 0b10]);
    }

    #[test]
    fn dotted_saddle_composition() {
        let h = matching(&[(0, 1), (2, 3)]);
        let v = matching(&[(0, 3), (1, 2)]);
        let mut f = CobSum::new();
        xor_term(&mut f, 1);
        let mut g = CobSum::new();
        xor_term(&mut g, 0);
        let c = compose(&h, &v, &h, &f, &g);
        // one dot total: every output cycle dotted, single term
        assert_eq!(c.as_slice(), &[0b11]);
        let mut g2 = CobSum::new();
        xor_term(&mut g2, 1);
        let c2 = compose(&h, &v, &h, &f, &g2);
        assert!(c2.is_empty());
    }

    #[test]
    fn inverse_of_dotted_identity() {
        let m = matching(&[(0, 1), (2, 3)]);
        let mut f = identity(&m);
        xor_term(&mut f, 0b01);
        let inv = invert(&m, &f).unwrap();
        assert_eq!(compose(&m, &m, &m, &f, &inv), identity(&m));
        assert_eq!(compose(&m, &m, &m, &inv, &f), identity(&m));
    }

    #[test]
    fn non_invertible_detected() {
        let m = matching(&[(0, 1)]);
        let mut f = CobSum::new();
        xor_term(&mut f, 0b1);
        assert!(invert(&m, &f).is_none());
    }

    #[test]
    fn scalar_composition() {
        let e: Matching = vec![];
        let one = identity(&e);
        let zero = CobSum::new();
        assert_eq!(compose(&e, &e, &e, &one, &one), one);
        assert!(compose(&e, &e, &e, &one, &zero).is_empty());
    }
}
