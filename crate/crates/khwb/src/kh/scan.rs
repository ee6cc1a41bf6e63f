//! Scanning computation of Khovanov homology: crossings are attached one at
//! a time to a simplified tangle complex. Circles are delooped into shifted
//! copies as they appear and invertible differential entries are cancelled
//! immediately, so memory tracks the boundary width of the processed
//! sub-diagram instead of the full cube.
//!
//! Surface bookkeeping: every junction point contributes +1 to the Euler
//! characteristic of its component (two corners minus one vertical edge),
//! and each piece contributes its face minus its horizontal boundary
//! segments: old-arc sheets and smoothing id-sheets -1, the saddle sheet -3,
//! f-pieces 1 minus their arc count, cups and caps +1. A component survives
//! only at genus zero with at most one dot; closed components are spheres
//! evaluating to the dot count being exactly one.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use smallvec::SmallVec;

use crate::diagram::Diagram;
use crate::kh::cob::{
    self, compose, invert, is_invertible, overlay_cycles, xor_sum, CobSum, Matching,
};
use crate::kh::{KhError, KhRanks, DEFAULT_MAX_GENERATORS};

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub max_generators: usize,
    /// Re-verify d∘d = 0 after every attachment (slow; tests only).
    pub paranoid: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { max_generators: DEFAULT_MAX_GENERATORS, paranoid: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mark {
    /// unreduced, or basepoint edge not yet reached
    None,
    /// the open arc whose smaller boundary point is given
    Arc(u8),
    /// basepoint circle was closed and delooped
    Done,
}

#[derive(Clone, Debug)]
struct Obj {
    m: Matching,
    mark: Mark,
    i: i32,
    j: i32,
}

/// Where each slot of the crossing being attached connects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Port {
    Sealed(u8),
    Fresh(u8),
    Internal(u8),
}

/// A strand piece of a glued object, for locating surface components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Piece {
    /// old matching arc, identified by its smaller boundary point
    OldArc(u8),
    /// smoothing arc 0 or 1
    Smoothing(u8),
}

/// Result of gluing one smoothing onto one object.
#[derive(Clone, Debug)]
struct Glued {
    matching: Matching,
    arc_pieces: Vec<SmallVec<[Piece; 4]>>,
    /// arc index of each new boundary point
    arc_of_point: Vec<u8>,
    circle_pieces: Vec<SmallVec<[Piece; 4]>>,
    marked_circle: Option<usize>,
    new_mark: Mark,
}

pub fn scan_ranks(d: &Diagram, reduced: bool, opts: &ScanOptions) -> Result<KhRanks, KhError> {
    let signs = d.signs()?;
    let bp_edge = if reduced {
        if d.edge_count > 0 {
            let bp = d.basepoint.unwrap_or(1);
            if bp == 0 || bp > d.edge_count {
                return Err(KhError::MissingBasepoint);
            }
            Some(bp)
        } else if d.free_loops > 0 {
            None // basepoint sits on the first free loop
        } else {
            return Err(KhError::MissingBasepoint);
        }
    } else {
        None
    };

    // initial objects: labelings of the free loops
    let loops = d.free_loops as usize;
    assert!(loops <= 32, "too many free loops");
    let marked_loop = reduced && d.edge_count == 0 && loops > 0;
    let free = if marked_loop { loops - 1 } else { loops };
    let mut objects: Vec<Obj> = Vec::new();
    for assignment in 0..(1u64 << free) {
        let mut j = if marked_loop { -1 } else { 0 };
        for k in 0..free {
            j += if assignment >> k & 1 == 1 { 1 } else { -1 };
        }
        objects.push(Obj {
            m: Vec::new(),
            mark: if reduced && d.edge_count > 0 { Mark::None } else { Mark::Done },
            i: 0,
            j,
        });
    }
    let mut out_edges: Vec<BTreeMap<u32, CobSum>> = vec![BTreeMap::new(); objects.len()];
    let mut in_edges: Vec<BTreeMap<u32, ()>> = vec![BTreeMap::new(); objects.len()];
    let mut alive: Vec<bool> = vec![true; objects.len()];

    let order = scan_order(d);
    let mut boundary: Vec<u32> = Vec::new();

    for &ci in &order {
        let tuple = d.crossings[ci].0;
        // classify slots
        let mut ports = [Port::Fresh(0); 4];
        let mut fresh_count = 0u8;
        for s in 0..4 {
            let e = tuple[s];
            if let Some(other) = (0..4).find(|&t| t != s && tuple[t] == e) {
                ports[s] = Port::Internal(other as u8);
            } else if let Some(p) = boundary.iter().position(|&x| x == e) {
                ports[s] = Port::Sealed(p as u8);
            } else {
                ports[s] = Port::Fresh(fresh_count);
                fresh_count += 1;
            }
        }
        // new boundary: surviving old points in order, then fresh slots
        let sealed: Vec<u8> = ports
            .iter()
            .filter_map(|p| if let Port::Sealed(x) = p { Some(*x) } else { None })
            .collect();
        let mut new_boundary: Vec<u32> = Vec::new();
        let mut old_to_new: Vec<Option<u8>> = vec![None; boundary.len()];
        for (p, &e) in boundary.iter().enumerate() {
            if !sealed.contains(&(p as u8)) {
                old_to_new[p] = Some(new_boundary.len() as u8);
                new_boundary.push(e);
            }
        }
        let mut fresh_to_new = [0u8; 4];
        for s in 0..4 {
            if matches!(ports[s], Port::Fresh(_)) {
                fresh_to_new[s] = new_boundary.len() as u8;
                new_boundary.push(tuple[s]);
            }
        }
        if new_boundary.len() > 250 {
            return Err(KhError::BrokenComplex("boundary exceeds 250 points".into()));
        }
        let bp_slot = bp_edge.and_then(|bp| (0..4).find(|&s| tuple[s] == bp));

        let positive = signs[ci] > 0;
        let (di_a, dj_a, di_b, dj_b) = if positive { (0, 1, 1, 2) } else { (-1, -2, 0, -1) };

        // glue both smoothings for every alive object
        let mut new_objects: Vec<Obj> = Vec::new();
        let mut new_out: Vec<BTreeMap<u32, CobSum>> = Vec::new();
        let mut new_in: Vec<BTreeMap<u32, ()>> = Vec::new();
        let mut glue_a: Vec<Option<Glued>> = vec![None; objects.len()];
        let mut glue_b: Vec<Option<Glued>> = vec![None; objects.len()];
        let mut ids_a: Vec<Vec<u32>> = vec![Vec::new(); objects.len()];
        let mut ids_b: Vec<Vec<u32>> = vec![Vec::new(); objects.len()];
        for oi in 0..objects.len() {
            if !alive[oi] {
                continue;
            }
            for (smoothing, (di, dj)) in [(0u8, (di_a, dj_a)), (1u8, (di_b, dj_b))] {
                let g = glue(&objects[oi], &ports, &old_to_new, &fresh_to_new, smoothing, bp_slot);
                let circles = g.circle_pieces.len();
                let unmarked: Vec<usize> =
                    (0..circles).filter(|&z| g.marked_circle != Some(z)).collect();
                let mut ids = Vec::with_capacity(1 << unmarked.len());
                for assignment in 0..(1u32 << unmarked.len()) {
                    let mut weight = if g.marked_circle.is_some() { -1 } else { 0 };
                    for k in 0..unmarked.len() {
                        weight += if assignment >> k & 1 == 1 { 1 } else { -1 };
                    }
                    let id = new_objects.len() as u32;
                    new_objects.push(Obj {
                        m: g.matching.clone(),
                        mark: g.new_mark,
                        i: objects[oi].i + di,
                        j: objects[oi].j + dj + weight,
                    });
                    new_out.push(BTreeMap::new());
                    new_in.push(BTreeMap::new());
                    ids.push(id);
                }
                if smoothing == 0 {
                    glue_a[oi] = Some(g);
                    ids_a[oi] = ids;
                } else {
                    glue_b[oi] = Some(g);
                    ids_b[oi] = ids;
                }
            }
        }
        if new_objects.len() > opts.max_generators {
            return Err(KhError::Budget {
                stage: format!("attaching crossing {ci}"),
                generators: new_objects.len(),
                ceiling: opts.max_generators,
            });
        }

        let mut add_entry = |new_out: &mut Vec<BTreeMap<u32, CobSum>>,
                             new_in: &mut Vec<BTreeMap<u32, ()>>,
                             new_objects: &Vec<Obj>,
                             src: u32,
                             tgt: u32,
                             sum: CobSum| {
            if sum.is_empty() {
                return;
            }
            debug_assert_eq!(new_objects[src as usize].i + 1, new_objects[tgt as usize].i);
            let entry = new_out[src as usize].entry(tgt).or_default();
            xor_sum(entry, &sum);
            if entry.is_empty() {
                new_out[src as usize].remove(&tgt);
                new_in[tgt as usize].remove(&src);
            } else {
                new_in[tgt as usize].insert(src, ());
            }
        };

        // saddle entries
        for oi in 0..objects.len() {
            if !alive[oi] {
                continue;
            }
            let ga = glue_a[oi].as_ref().unwrap();
            let gb = glue_b[oi].as_ref().unwrap();
            for (la, lb, sum) in saddle_entries(&objects[oi], ga, gb, &ports) {
                add_entry(&mut new_out, &mut new_in, &new_objects, ids_a[oi][la], ids_b[oi][lb], sum);
            }
        }
        // conjugated old entries
        for o1 in 0..objects.len() {
            if !alive[o1] {
                continue;
            }
            let olds: Vec<(u32, CobSum)> =
                out_edges[o1].iter().map(|(k, v)| (*k, v.clone())).collect();
            for (o2, f) in olds {
                let o2 = o2 as usize;
                for smoothing in [0u8, 1u8] {
                    let (g1, ids1) = if smoothing == 0 {
                        (glue_a[o1].as_ref().unwrap(), &ids_a[o1])
                    } else {
                        (glue_b[o1].as_ref().unwrap(), &ids_b[o1])
                    };
                    let (g2, ids2) = if smoothing == 0 {
                        (glue_a[o2].as_ref().unwrap(), &ids_a[o2])
                    } else {
                        (glue_b[o2].as_ref().unwrap(), &ids_b[o2])
                    };
                    for (l1, l2, sum) in
                        conjugated_entries(&objects[o1], &objects[o2], &f, g1, g2, &ports, smoothing)
                    {
                        add_entry(&mut new_out, &mut new_in, &new_objects, ids1[l1], ids2[l2], sum);
                    }
                }
            }
        }

        objects = new_objects;
        out_edges = new_out;
        in_edges = new_in;
        alive = vec![true; objects.len()];
        boundary = new_boundary;

        if opts.paranoid {
            verify_complex(&objects, &out_edges, &alive)?;
        }
        cancel_all(&objects, &mut out_edges, &mut in_edges, &mut alive);
        if opts.paranoid {
            verify_complex(&objects, &out_edges, &alive)?;
        }
    }

    // the fully cancelled end complex has no differentials left
    for (oi, outs) in out_edges.iter().enumerate() {
        if alive[oi] && !outs.is_empty() {
            return Err(KhError::BrokenComplex("uncancelled differential at end of scan".into()));
        }
    }
    let j_shift = if reduced { 1 } else { 0 };
    let mut table: BTreeMap<(i32, i32), u64> = BTreeMap::new();
    for (oi, o) in objects.iter().enumerate() {
        if alive[oi] {
            *table.entry((o.i, o.j + j_shift)).or_insert(0) += 1;
        }
    }
    Ok(KhRanks::from_table(table))
}

/// Greedy crossing order minimizing the open boundary after each step.
pub fn scan_order(d: &Diagram) -> Vec<usize> {
    let n = d.crossings.len();
    let ports_table = d.edge_ports();
    let mut order = Vec::with_capacity(n);
    let mut done = vec![false; n];
    let mut open: BTreeMap<u32, ()> = BTreeMap::new();
    let mut boundary_size: i64 = 0;
    for _ in 0..n {
        let mut best: Option<(i64, usize)> = None;
        for ci in 0..n {
            if done[ci] {
                continue;
            }
            let tuple = d.crossings[ci].0;
            let mut internal_pairs = 0i64;
            let mut seen: SmallVec<[u32; 4]> = SmallVec::new();
            for &e in &tuple {
                if seen.contains(&e) {
                    internal_pairs += 1;
                } else {
                    seen.push(e);
                }
            }
            let sealed = seen.iter().filter(|e| open.contains_key(e)).count() as i64;
            let fresh = 4 - 2 * internal_pairs - sealed;
            let new_size = boundary_size - sealed + fresh;
            let key = (new_size, ci);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let (_, ci) = best.unwrap();
        for (s, &e) in d.crossings[ci].0.iter().enumerate() {
            let [(c1, s1), (c2, s2)] = ports_table[e as usize];
            let internal = c1 == c2 && c1 == ci && s1 != s2;
            if internal {
                continue;
            }
            if open.remove(&e).is_some() {
                boundary_size -= 1;
            } else {
                open.insert(e, ());
                boundary_size += 1;
            }
            let _ = s;
        }
        done[ci] = true;
        order.push(ci);
    }
    order
}

fn smoothing_pairs(smoothing: u8) -> [(usize, usize); 2] {
    if smoothing == 0 {
        [(0, 1), (2, 3)]
    } else {
        [(0, 3), (1, 2)]
    }
}

fn smoothing_arc_of_slot(smoothing: u8, s: usize) -> u8 {
    smoothing_pairs(smoothing).iter().position(|&(a, b)| a == s || b == s).unwrap() as u8
}

/// Attach one smoothing of the crossing to an object's matching.
fn glue(
    o: &Obj,
    ports: &[Port; 4],
    old_to_new: &[Option<u8>],
    fresh_to_new: &[u8; 4],
    smoothing: u8,
    bp_slot: Option<usize>,
) -> Glued {
    // terminal graph: old points 0..k, slots k..k+4
    let k = o.m.len();
    let slot_node = |s: usize| k + s;
    let mut strand: Vec<Option<usize>> = vec![None; k + 4];
    let mut seal: Vec<Option<usize>> = vec![None; k + 4];
    for p in 0..k {
        strand[p] = Some(o.m[p] as usize);
    }
    for (a, b) in smoothing_pairs(smoothing) {
        strand[slot_node(a)] = Some(slot_node(b));
        strand[slot_node(b)] = Some(slot_node(a));
    }
    for (s, port) in ports.iter().enumerate() {
        match port {
            Port::Sealed(p) => {
                seal[slot_node(s)] = Some(*p as usize);
                seal[*p as usize] = Some(slot_node(s));
            }
            Port::Internal(t) => {
                seal[slot_node(s)] = Some(slot_node(*t as usize));
            }
            Port::Fresh(_) => {}
        }
    }
    let piece_for = |node: usize, other: usize| -> Piece {
        if node < k {
            Piece::OldArc(node.min(other) as u8)
        } else {
            Piece::Smoothing(smoothing_arc_of_slot(smoothing, node - k))
        }
    };
    let new_point = |node: usize| -> u8 {
        if node < k {
            old_to_new[node].expect("open point survives")
        } else {
            fresh_to_new[node - k]
        }
    };
    let open_end = |node: usize| -> bool { seal[node].is_none() };

    let total_new_points = old_to_new.iter().flatten().count()
        + ports.iter().filter(|p| matches!(p, Port::Fresh(_))).count();
    let mut matching = vec![0u8; total_new_points];
    let mut arc_pieces: Vec<SmallVec<[Piece; 4]>> = Vec::new();
    let mut arc_of_point = vec![0u8; total_new_points];
    let mut circle_pieces: Vec<SmallVec<[Piece; 4]>> = Vec::new();
    let mut visited = vec![false; k + 4];

    // trace open strands
    for start in 0..k + 4 {
        if visited[start] || !open_end(start) {
            continue;
        }
        let mut pieces: SmallVec<[Piece; 4]> = SmallVec::new();
        let mut node = start;
        visited[node] = true;
        loop {
            let next = strand[node].expect("strand link");
            pieces.push(piece_for(node, next));
            visited[next] = true;
            match seal[next] {
                Some(hop) => {
                    visited[hop] = true;
                    node = hop;
                }
                None => {
                    let (a, b) = (new_point(start), new_point(next));
                    matching[a as usize] = b;
                    matching[b as usize] = a;
                    let arc_id = arc_pieces.len() as u8;
                    arc_of_point[a as usize] = arc_id;
                    arc_of_point[b as usize] = arc_id;
                    arc_pieces.push(pieces);
                    break;
                }
            }
        }
    }
    // remaining nodes form circles
    for start in 0..k + 4 {
        if visited[start] {
            continue;
        }
        let mut pieces: SmallVec<[Piece; 4]> = SmallVec::new();
        let mut node = start;
        loop {
            visited[node] = true;
            let next = strand[node].expect("strand link");
            pieces.push(piece_for(node, next));
            visited[next] = true;
            let hop = seal[next].expect("circle node sealed");
            visited[hop] = true;
            node = hop;
            if node == start {
                break;
            }
        }
        circle_pieces.push(pieces);
    }

    // mark transfer
    let mark_piece: Option<Piece> = match o.mark {
        Mark::Arc(p) => Some(Piece::OldArc(p.min(o.m[p as usize]) as u8)),
        Mark::None => {
            bp_slot.map(|s| Piece::Smoothing(smoothing_arc_of_slot(smoothing, s)))
        }
        Mark::Done => None,
    };
    let mut marked_circle = None;
    let mut new_mark = match o.mark {
        Mark::Done => Mark::Done,
        _ => Mark::None,
    };
    if let Some(mp) = mark_piece {
        if let Some(arc) = arc_pieces.iter().position(|ps| ps.contains(&mp)) {
            let a = (0..total_new_points)
                .filter(|&p| arc_of_point[p] == arc as u8)
                .min()
                .unwrap() as u8;
            new_mark = Mark::Arc(a);
        } else if let Some(z) = circle_pieces.iter().position(|ps| ps.contains(&mp)) {
            marked_circle = Some(z);
            new_mark = Mark::Done;
        } else {
            unreachable!("marked piece must lie on some strand");
        }
    }
    Glued { matching, arc_pieces, arc_of_point, circle_pieces, marked_circle, new_mark }
}

struct Components {
    parent: Vec<usize>,
}

impl Components {
    fn new(n: usize) -> Self {
        Components { parent: (0..n).collect() }
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let n = self.parent[c];
            self.parent[c] = r;
            c = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Expand surviving components into a canonical dot-mask sum; None when a
/// component evaluates to zero.
fn expand(comp_data: &[(i64, u32, SmallVec<[u16; 8]>)]) -> Option<CobSum> {
    let mut partial: SmallVec<[u16; 8]> = SmallVec::new();
    partial.push(0);
    let mut scratch: SmallVec<[u16; 8]> = SmallVec::new();
    for (chi, dots, cycles) in comp_data {
        if cycles.is_empty() {
            // closed component: a sphere with exactly one dot is 1
            if *chi != 2 || *dots != 1 {
                return None;
            }
            continue;
        }
        let b = cycles.len() as i64;
        let two_g = 2 - b - chi;
        debug_assert!(two_g >= 0 && two_g % 2 == 0, "broken Euler characteristic");
        if two_g != 0 || *dots >= 2 {
            return None;
        }
        cob::component_masks(cycles, *dots, &mut scratch);
        if scratch.is_empty() {
            return None;
        }
        let mut next: SmallVec<[u16; 8]> = SmallVec::new();
        for &base in &partial {
            for &add in &scratch {
                next.push(base | add);
            }
        }
        partial = next;
    }
    let mut out = CobSum::new();
    for &m in &partial {
        cob::xor_term(&mut out, m);
    }
    Some(out)
}

/// Saddle entries (o,A,la) -> (o,B,lb) for all label vectors.
fn saddle_entries(
    o: &Obj,
    ga: &Glued,
    gb: &Glued,
    ports: &[Port; 4],
) -> Vec<(usize, usize, CobSum)> {
    let k = o.m.len();
    let arcs = k / 2;
    // pieces: old arcs, then the saddle, then cups, then caps
    let saddle = arcs;
    let cups0 = arcs + 1;
    let caps0 = cups0 + ga.circle_pieces.len();
    let total = caps0 + gb.circle_pieces.len();
    let mut uf = Components::new(total);
    let mut arc_idx_of_smaller = vec![usize::MAX; k.max(1)];
    {
        let mut idx = 0;
        for p in 0..k {
            if (o.m[p] as usize) > p {
                arc_idx_of_smaller[p] = idx;
                idx += 1;
            }
        }
    }
    let arc_at = |p: usize, o: &Obj| -> usize {
        let q = o.m[p] as usize;
        arc_idx_of_smaller[p.min(q)]
    };
    let node_of_piece = |pc: &Piece| -> usize {
        match pc {
            Piece::OldArc(p) => arc_idx_of_smaller[*p as usize],
            Piece::Smoothing(_) => saddle,
        }
    };
    let mut node_count = vec![0i64; total];
    for (s, port) in ports.iter().enumerate() {
        match port {
            Port::Sealed(p) => {
                let arc = arc_at(*p as usize, o);
                uf.union(arc, saddle);
                node_count[arc] += 1;
            }
            Port::Internal(t) => {
                if s < *t as usize {
                    node_count[saddle] += 1;
                }
            }
            Port::Fresh(_) => {
                node_count[saddle] += 1;
            }
        }
    }
    for p in 0..k {
        let sealed_here = ports.iter().any(|pt| matches!(pt, Port::Sealed(x) if *x as usize == p));
        if !sealed_here {
            node_count[arc_at(p, o)] += 1;
        }
    }
    for (z, pieces) in ga.circle_pieces.iter().enumerate() {
        for pc in pieces {
            uf.union(cups0 + z, node_of_piece(pc));
        }
    }
    for (z, pieces) in gb.circle_pieces.iter().enumerate() {
        for pc in pieces {
            uf.union(caps0 + z, node_of_piece(pc));
        }
    }
    let mut comp_of = vec![usize::MAX; total];
    let mut comp_chi: Vec<i64> = Vec::new();
    for piece in 0..total {
        let root = uf.find(piece);
        if comp_of[root] == usize::MAX {
            comp_of[root] = comp_chi.len();
            comp_chi.push(0);
        }
        let idx = comp_of[root];
        comp_of[piece] = idx;
        let weight = if piece < arcs {
            -1
        } else if piece == saddle {
            -3
        } else {
            1
        };
        comp_chi[idx] += weight + node_count[piece];
    }
    let ncomp = comp_chi.len();
    let mut cycle_of_point = Vec::new();
    let out_cycles = overlay_cycles(&ga.matching, &gb.matching, &mut cycle_of_point);
    let mut comp_out: Vec<SmallVec<[u16; 8]>> = vec![SmallVec::new(); ncomp];
    for c in 0..out_cycles {
        let p = cycle_of_point.iter().position(|&x| x as usize == c).unwrap();
        let arc = ga.arc_of_point[p] as usize;
        let first = ga.arc_pieces[arc].first().expect("nonempty arc");
        comp_out[comp_of[node_of_piece(first)]].push(c as u16);
    }
    let unmarked_a: Vec<usize> =
        (0..ga.circle_pieces.len()).filter(|&z| ga.marked_circle != Some(z)).collect();
    let unmarked_b: Vec<usize> =
        (0..gb.circle_pieces.len()).filter(|&z| gb.marked_circle != Some(z)).collect();
    let mut entries = Vec::new();
    for la in 0..(1usize << unmarked_a.len()) {
        for lb in 0..(1usize << unmarked_b.len()) {
            let mut comp_dots = vec![0u32; ncomp];
            for z in 0..ga.circle_pieces.len() {
                let plus = unmarked_a
                    .iter()
                    .position(|&u| u == z)
                    .map(|bit| la >> bit & 1 == 1)
                    .unwrap_or(false);
                if !plus {
                    comp_dots[comp_of[cups0 + z]] += 1; // dotted cup injects v-
                }
            }
            for z in 0..gb.circle_pieces.len() {
                let plus = unmarked_b
                    .iter()
                    .position(|&u| u == z)
                    .map(|bit| lb >> bit & 1 == 1)
                    .unwrap_or(false);
                if plus {
                    comp_dots[comp_of[caps0 + z]] += 1; // dotted cap extracts v+
                }
            }
            let data: Vec<(i64, u32, SmallVec<[u16; 8]>)> =
                (0..ncomp).map(|c| (comp_chi[c], comp_dots[c], comp_out[c].clone())).collect();
            if let Some(sum) = expand(&data) {
                entries.push((la, lb, sum));
            }
        }
    }
    entries
}

/// Conjugated old entries (o1,s,l1) -> (o2,s,l2).
#[allow(clippy::too_many_arguments)]
fn conjugated_entries(
    o1: &Obj,
    o2: &Obj,
    f: &CobSum,
    g1: &Glued,
    g2: &Glued,
    ports: &[Port; 4],
    smoothing: u8,
) -> Vec<(usize, usize, CobSum)> {
    let mut f_cycle_of_point = Vec::new();
    let f_cycles = overlay_cycles(&o1.m, &o2.m, &mut f_cycle_of_point);
    let id0 = f_cycles;
    let cups0 = id0 + 2;
    let caps0 = cups0 + g1.circle_pieces.len();
    let total = caps0 + g2.circle_pieces.len();
    let mut uf = Components::new(total);
    let node_of_piece = |pc: &Piece| -> usize {
        match pc {
            Piece::OldArc(p) => f_cycle_of_point[*p as usize] as usize,
            Piece::Smoothing(a) => id0 + *a as usize,
        }
    };
    let mut node_count = vec![0i64; total];
    let k = o1.m.len();
    for (s, port) in ports.iter().enumerate() {
        let sheet = id0 + smoothing_arc_of_slot(smoothing, s) as usize;
        match port {
            Port::Sealed(p) => {
                let fc = f_cycle_of_point[*p as usize] as usize;
                uf.union(fc, sheet);
                node_count[fc] += 1;
            }
            Port::Internal(t) => {
                if s < *t as usize {
                    let other = id0 + smoothing_arc_of_slot(smoothing, *t as usize) as usize;
                    uf.union(sheet, other);
                    node_count[sheet] += 1;
                }
            }
            Port::Fresh(_) => {
                node_count[sheet] += 1;
            }
        }
    }
    for p in 0..k {
        let sealed_here = ports.iter().any(|pt| matches!(pt, Port::Sealed(x) if *x as usize == p));
        if !sealed_here {
            node_count[f_cycle_of_point[p] as usize] += 1;
        }
    }
    for (z, pieces) in g1.circle_pieces.iter().enumerate() {
        for pc in pieces {
            uf.union(cups0 + z, node_of_piece(pc));
        }
    }
    for (z, pieces) in g2.circle_pieces.iter().enumerate() {
        for pc in pieces {
            uf.union(caps0 + z, node_of_piece(pc));
        }
    }
    // f-piece weight: 1 minus its source and target arc counts
    let mut f_weight = vec![1i64; f_cycles.max(1)];
    for p in 0..k {
        if (o1.m[p] as usize) > p {
            f_weight[f_cycle_of_point[p] as usize] -= 1;
        }
        if (o2.m[p] as usize) > p {
            f_weight[f_cycle_of_point[p] as usize] -= 1;
        }
    }
    let mut comp_of = vec![usize::MAX; total];
    let mut comp_chi: Vec<i64> = Vec::new();
    for piece in 0..total {
        let root = uf.find(piece);
        if comp_of[root] == usize::MAX {
            comp_of[root] = comp_chi.len();
            comp_chi.push(0);
        }
        let idx = comp_of[root];
        comp_of[piece] = idx;
        let weight = if piece < f_cycles {
            f_weight[piece]
        } else if piece < id0 + 2 {
            -1
        } else {
            1
        };
        comp_chi[idx] += weight + node_count[piece];
    }
    let ncomp = comp_chi.len();
    let mut cycle_of_point = Vec::new();
    let out_cycles = overlay_cycles(&g1.matching, &g2.matching, &mut cycle_of_point);
    let mut comp_out: Vec<SmallVec<[u16; 8]>> = vec![SmallVec::new(); ncomp];
    for c in 0..out_cycles {
        let p = cycle_of_point.iter().position(|&x| x as usize == c).unwrap();
        let arc = g1.arc_of_point[p] as usize;
        let first = g1.arc_pieces[arc].first().expect("nonempty arc");
        comp_out[comp_of[node_of_piece(first)]].push(c as u16);
    }
    let unmarked_1: Vec<usize> =
        (0..g1.circle_pieces.len()).filter(|&z| g1.marked_circle != Some(z)).collect();
    let unmarked_2: Vec<usize> =
        (0..g2.circle_pieces.len()).filter(|&z| g2.marked_circle != Some(z)).collect();
    let mut entries = Vec::new();
    for l1 in 0..(1usize << unmarked_1.len()) {
        for l2 in 0..(1usize << unmarked_2.len()) {
            let mut out_sum = CobSum::new();
            for &fm in f {
                let mut comp_dots = vec![0u32; ncomp];
                for c in 0..f_cycles {
                    if fm >> c & 1 == 1 {
                        comp_dots[comp_of[c]] += 1;
                    }
                }
                for z in 0..g1.circle_pieces.len() {
                    let plus = unmarked_1
                        .iter()
                        .position(|&u| u == z)
                        .map(|bit| l1 >> bit & 1 == 1)
                        .unwrap_or(false);
                    if !plus {
                        comp_dots[comp_of[cups0 + z]] += 1;
                    }
                }
                for z in 0..g2.circle_pieces.len() {
                    let plus = unmarked_2
                        .iter()
                        .position(|&u| u == z)
                        .map(|bit| l2 >> bit & 1 == 1)
                        .unwrap_or(false);
                    if plus {
                        comp_dots[comp_of[caps0 + z]] += 1;
                    }
                }
                let data: Vec<(i64, u32, SmallVec<[u16; 8]>)> =
                    (0..ncomp).map(|c| (comp_chi[c], comp_dots[c], comp_out[c].clone())).collect();
                if let Some(sum) = expand(&data) {
                    xor_sum(&mut out_sum, &sum);
                }
            }
            if !out_sum.is_empty() {
                entries.push((l1, l2, out_sum));
            }
        }
    }
    entries
}

/// Cancel invertible entries, smallest fill-in first.
fn cancel_all(
    objects: &[Obj],
    out_edges: &mut [BTreeMap<u32, CobSum>],
    in_edges: &mut [BTreeMap<u32, ()>],
    alive: &mut [bool],
) {
    let mut heap: BinaryHeap<Reverse<(u64, u32, u32)>> = BinaryHeap::new();
    let fill = |out_edges: &[BTreeMap<u32, CobSum>],
                in_edges: &[BTreeMap<u32, ()>],
                a: u32,
                b: u32| -> u64 {
        let outs = out_edges[a as usize].len().saturating_sub(1) as u64;
        let ins = in_edges[b as usize].len().saturating_sub(1) as u64;
        outs * ins
    };
    for a in 0..out_edges.len() {
        for (b, sum) in &out_edges[a] {
            if objects[a].m == objects[*b as usize].m && is_invertible(sum) {
                heap.push(Reverse((fill(out_edges, in_edges, a as u32, *b), a as u32, *b)));
            }
        }
    }
    while let Some(Reverse((_, a, b))) = heap.pop() {
        let (a, b) = (a as usize, b as usize);
        if !alive[a] || !alive[b] {
            continue;
        }
        let Some(phi) = out_edges[a].get(&(b as u32)) else { continue };
        if !is_invertible(phi) {
            continue;
        }
        let m = objects[a].m.clone();
        let phi_inv = invert(&m, phi).expect("checked invertible");
        let ins: Vec<u32> = in_edges[b]
            .keys()
            .copied()
            .filter(|&x| x as usize != a && alive[x as usize])
            .collect();
        let outs: Vec<u32> = out_edges[a]
            .keys()
            .copied()
            .filter(|&y| y as usize != b && alive[y as usize])
            .collect();
        alive[a] = false;
        alive[b] = false;
        for &x in &ins {
            let alpha = out_edges[x as usize].get(&(b as u32)).cloned().unwrap_or_default();
            if alpha.is_empty() {
                continue;
            }
            let pre = compose(&objects[x as usize].m, &m, &m, &alpha, &phi_inv);
            if pre.is_empty() {
                continue;
            }
            for &y in &outs {
                let beta = out_edges[a].get(&y).cloned().unwrap_or_default();
                if beta.is_empty() {
                    continue;
                }
                let delta =
                    compose(&objects[x as usize].m, &m, &objects[y as usize].m, &pre, &beta);
                if delta.is_empty() {
                    continue;
                }
                let entry = out_edges[x as usize].entry(y).or_default();
                xor_sum(entry, &delta);
                if entry.is_empty() {
                    out_edges[x as usize].remove(&y);
                    in_edges[y as usize].remove(&x);
                } else {
                    in_edges[y as usize].insert(x, ());
                    if objects[x as usize].m == objects[y as usize].m
                        && is_invertible(out_edges[x as usize].get(&y).unwrap())
                    {
                        heap.push(Reverse((fill(out_edges, in_edges, x, y), x, y)));
                    }
                }
            }
        }
        for dead in [a, b] {
            let outs_d: Vec<u32> = out_edges[dead].keys().copied().collect();
            for y in outs_d {
                in_edges[y as usize].remove(&(dead as u32));
            }
            out_edges[dead].clear();
            let ins_d: Vec<u32> = in_edges[dead].keys().copied().collect();
            for x in ins_d {
                out_edges[x as usize].remove(&(dead as u32));
            }
            in_edges[dead].clear();
        }
    }
}

/// Check d∘d = 0 and grading homogeneity on the current complex.
fn verify_complex(
    objects: &[Obj],
    out_edges: &[BTreeMap<u32, CobSum>],
    alive: &[bool],
) -> Result<(), KhError> {
    for x in 0..objects.len() {
        if !alive[x] {
            continue;
        }
        let mut acc: BTreeMap<u32, CobSum> = BTreeMap::new();
        for (y, f) in &out_edges[x] {
            let (ox, oy) = (&objects[x], &objects[*y as usize]);
            if oy.i != ox.i + 1 {
                return Err(KhError::BrokenComplex("entry not degree one".into()));
            }
            // quantum homogeneity: dj = points/2 - overlay cycles + 2 dots
            let mut cycle_of_point = Vec::new();
            let cycles = overlay_cycles(&ox.m, &oy.m, &mut cycle_of_point) as i32;
            let half_points = ox.m.len() as i32 / 2;
            for &mask in f {
                let dj = half_points - cycles + 2 * mask.count_ones() as i32;
                if oy.j - ox.j != dj {
                    return Err(KhError::BrokenComplex(format!(
                        "entry not grading homogeneous: dj {} vs {}",
                        oy.j - ox.j,
                        dj
                    )));
                }
            }
            for (z, g) in &out_edges[*y as usize] {
                let c = compose(&ox.m, &oy.m, &objects[*z as usize].m, f, g);
                let slot = acc.entry(*z).or_default();
                xor_sum(slot, &c);
            }
        }
        for (z, sum) in acc {
            if !sum.is_empty() {
                return Err(KhError::BrokenComplex(format!(
                    "d∘d nonzero between objects {x} and {z}"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use crate::generators::{braid_closure, torus_knot};
    use crate::kh::cube::cube_complex;
    use crate::kh::homology_ranks;

    fn check_against_cube(d: &Diagram, label: &str) {
        let opts = ScanOptions { paranoid: true, ..Default::default() };
        for reduced in [false, true] {
            let cube = homology_ranks(&cube_complex(d, reduced).unwrap()).unwrap();
            let scan = scan_ranks(d, reduced, &opts).unwrap();
            assert_eq!(cube, scan, "{label} reduced={reduced}");
        }
    }

    #[test]
    fn scan_matches_cube_on_unknots() {
        check_against_cube(&Diagram::unknot(), "crossingless");
        for pd in ["X(1,1,2,2)", "X(1,2,2,1)"] {
            check_against_cube(&parse_pd(pd).unwrap(), pd);
        }
    }

    #[test]
    fn scan_matches_cube_on_small_knots() {
        let trefoil = parse_pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap();
        check_against_cube(&trefoil, "trefoil");
        check_against_cube(&trefoil.mirror().unwrap(), "mirror trefoil");
        let fig8 = braid_closure(&[1, -2, 1, -2], 3).unwrap();
        check_against_cube(&fig8, "figure8");
        let hopf = parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap();
        check_against_cube(&hopf, "hopf");
    }

    #[test]
    fn scan_matches_cube_on_torus_knots() {
        for (p, q) in [(2i64, 3i64), (2, 5), (2, 7), (3, 4)] {
            let d = torus_knot(p, q).unwrap();
            check_against_cube(&d, &format!("T({p},{q})"));
        }
    }

    #[test]
    fn scan_reduced_torus_ranks() {
        // alternating torus knots have reduced total rank q over F
        for q in [3i64, 5, 7, 9, 11] {
            let d = torus_knot(2, q).unwrap();
            let r = scan_ranks(&d, true, &ScanOptions::default()).unwrap();
            assert_eq!(r.total, q as u64, "T(2,{q})");
        }
    }

    #[test]
    fn budget_is_reported() {
        let d = torus_knot(3, 7).unwrap();
        let opts = ScanOptions { max_generators: 3, paranoid: false };
        assert!(matches!(scan_ranks(&d, false, &opts), Err(KhError::Budget { .. })));
    }
}
