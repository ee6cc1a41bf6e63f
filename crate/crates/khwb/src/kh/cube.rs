//! Full cube of resolutions: the brute-force oracle path.
//!
//! Every one of the 2^n resolutions is enumerated; circles carry labels in
//! {v-, v+} and the edge maps are the usual merge/split of the rank-two
//! Frobenius algebra. The reduced flavor fixes the label of the circle
//! through the basepoint edge to v-.

use std::collections::{BTreeMap, HashMap};

use crate::diagram::Diagram;
use crate::gf2::SparseF2;
use crate::kh::{GradedComplex, KhError, CUBE_GUARD};

/// Circles of one resolution, as union-find roots over crossing ports and
/// free loops. Port p = 4*crossing + slot; loops follow after ports.
struct Resolution {
    /// circle index of every port/loop node
    circle_of_node: Vec<usize>,
    circles: usize,
    /// circle containing the basepoint, if tracked
    marked: Option<usize>,
}

fn resolve(d: &Diagram, state: u32, basepoint_node: Option<usize>) -> Resolution {
    let n = d.crossings.len();
    let nodes = 4 * n + d.free_loops as usize;
    let mut parent: Vec<usize> = (0..nodes).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
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
    let mut union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    };
    // edges glue their two ports
    for ports in d.edge_ports().iter().skip(1) {
        let [(c1, s1), (c2, s2)] = *ports;
        if c1 != usize::MAX {
            union(&mut parent, 4 * c1 + s1, 4 * c2 + s2);
        }
    }
    // smoothings glue ports within each crossing:
    // A pairs (0,1),(2,3); B pairs (0,3),(1,2)
    for ci in 0..n {
        if state >> ci & 1 == 0 {
            union(&mut parent, 4 * ci, 4 * ci + 1);
            union(&mut parent, 4 * ci + 2, 4 * ci + 3);
        } else {
            union(&mut parent, 4 * ci, 4 * ci + 3);
            union(&mut parent, 4 * ci + 1, 4 * ci + 2);
        }
    }
    let mut circle_index: HashMap<usize, usize> = HashMap::new();
    let mut circle_of_node = vec![0usize; nodes];
    for node in 0..nodes {
        let root = find(&mut parent, node);
        let next = circle_index.len();
        let idx = *circle_index.entry(root).or_insert(next);
        circle_of_node[node] = idx;
    }
    let marked = basepoint_node.map(|bn| circle_of_node[bn]);
    Resolution { circle_of_node, circles: circle_index.len(), marked }
}

/// Build the full cube complex. Guarded at [`CUBE_GUARD`] crossings; the
/// reduced flavor defaults the basepoint to edge 1.
pub fn cube_complex(d: &Diagram, reduced: bool) -> Result<GradedComplex, KhError> {
    let n = d.crossings.len();
    if n > CUBE_GUARD {
        return Err(KhError::CubeGuard(n, CUBE_GUARD));
    }
    let (n_pos, n_neg) = d.signed_counts()?;
    let (n_pos, n_neg) = (n_pos as i32, n_neg as i32);

    let basepoint_node = if reduced {
        if d.edge_count > 0 {
            let bp = d.basepoint.unwrap_or(1);
            if bp == 0 || bp > d.edge_count {
                return Err(KhError::MissingBasepoint);
            }
            let [(c1, s1), _] = d.edge_ports()[bp as usize];
            Some(4 * c1 + s1)
        } else if d.free_loops > 0 {
            Some(4 * n) // first free loop
        } else {
            return Err(KhError::MissingBasepoint);
        }
    } else {
        None
    };

    // enumerate generators
    let mut gradings: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
    // (state, labels) -> (i, row index)
    let mut index: HashMap<(u32, u32), usize> = HashMap::new();
    let mut resolutions: Vec<Resolution> = Vec::with_capacity(1 << n);
    for state in 0..(1u32 << n) {
        resolutions.push(resolve(d, state, basepoint_node));
    }
    let j_shift = if reduced { 1 } else { 0 };
    for (state, res) in resolutions.iter().enumerate() {
        let r = (state as u32).count_ones() as i32;
        let i = r - n_neg;
        let base_j = r + n_pos - 2 * n_neg + j_shift;
        let free_bits: Vec<usize> =
            (0..res.circles).filter(|&c| res.marked != Some(c)).collect();
        for assignment in 0..(1u32 << free_bits.len()) {
            let mut labels = 0u32;
            let mut weight = 0i32;
            for (k, &c) in free_bits.iter().enumerate() {
                if assignment >> k & 1 == 1 {
                    labels |= 1 << c;
                    weight += 1;
                } else {
                    weight -= 1;
                }
            }
            if res.marked.is_some() {
                weight -= 1; // marked circle fixed at v-
            }
            let j = base_j + weight;
            let row = gradings.entry(i).or_default();
            index.insert((state as u32, labels), row.len());
            row.push(j);
        }
    }

    // differentials
    let mut differentials: BTreeMap<i32, SparseF2> = BTreeMap::new();
    for (&i, src) in &gradings {
        let tgt_len = gradings.get(&(i + 1)).map(Vec::len).unwrap_or(0);
        differentials.insert(i, SparseF2::new(src.len(), tgt_len.max(0)));
    }
    for state in 0..(1u32 << n) {
        let res = &resolutions[state as usize];
        let r = state.count_ones() as i32;
        let i = r - n_neg;
        for k in 0..n {
            if state >> k & 1 == 1 {
                continue;
            }
            let state2 = state | 1 << k;
            let res2 = &resolutions[state2 as usize];
            // correspondence via shared ports: circles away from crossing k
            // keep their meaning; through k they merge or split
            if res2.circles + 1 == res.circles {
                // merge: the two source circles through crossing k
                let z1 = res.circle_of_node[4 * k];
                let z2 = (0..4)
                    .map(|s| res.circle_of_node[4 * k + s])
                    .find(|&z| z != z1)
                    .unwrap_or(z1);
                if z1 == z2 {
                    return Err(KhError::BrokenComplex(
                        "merge with a single source circle".into(),
                    ));
                }
                let zt = res2.circle_of_node[4 * k];
                apply_entries(
                    d, state, state2, res, res2, i, &gradings, &index,
                    &mut differentials,
                    &mut |labels: u32, emit: &mut dyn FnMut(u32)| {
                        let (b1, b2) = (labels >> z1 & 1, labels >> z2 & 1);
                        if b1 == 0 && b2 == 0 {
                            return; // v- v- maps to zero
                        }
                        let out_bit = b1 & b2;
                        emit_target_labels(labels, res, res2, zt, out_bit, emit);
                    },
                )?;
            } else if res.circles + 1 == res2.circles {
                // split: source circle through k becomes two targets
                let z = res.circle_of_node[4 * k];
                let t1 = res2.circle_of_node[4 * k];
                let t2 = (0..4)
                    .map(|s| res2.circle_of_node[4 * k + s])
                    .find(|&t| t != t1)
                    .unwrap_or(t1);
                if t1 == t2 {
                    return Err(KhError::BrokenComplex(
                        "split with a single target circle".into(),
                    ));
                }
                apply_entries(
                    d, state, state2, res, res2, i, &gradings, &index,
                    &mut differentials,
                    &mut |labels: u32, emit: &mut dyn FnMut(u32)| {
                        let b = labels >> z & 1;
                        if b == 1 {
                            // v+ -> v+ v- + v- v+
                            emit_split(labels, res, res2, z, t1, t2, (1, 0), emit);
                            emit_split(labels, res, res2, z, t1, t2, (0, 1), emit);
                        } else {
                            emit_split(labels, res, res2, z, t1, t2, (0, 0), emit);
                        }
                    },
                )?;
            } else {
                return Err(KhError::BrokenComplex(format!(
                    "saddle changed circle count from {} to {}",
                    res.circles, res2.circles
                )));
            }
        }
    }
    Ok(GradedComplex { gradings, differentials })
}

/// Map untouched circles of `res` to their circles in `res2` by any shared
/// node, write the target labels, and emit.
fn emit_target_labels(
    labels: u32,
    res: &Resolution,
    res2: &Resolution,
    merged_target: usize,
    merged_bit: u32,
    emit: &mut dyn FnMut(u32),
) {
    let mut out = 0u32;
    if merged_bit == 1 {
        out |= 1 << merged_target;
    }
    for (node, &z) in res.circle_of_node.iter().enumerate() {
        let t = res2.circle_of_node[node];
        if t == merged_target {
            continue;
        }
        if labels >> z & 1 == 1 {
            out |= 1 << t;
        }
    }
    emit(out);
}

fn emit_split(
    labels: u32,
    res: &Resolution,
    res2: &Resolution,
    source: usize,
    t1: usize,
    t2: usize,
    bits: (u32, u32),
    emit: &mut dyn FnMut(u32),
) {
    let mut out = 0u32;
    if bits.0 == 1 {
        out |= 1 << t1;
    }
    if bits.1 == 1 {
        out |= 1 << t2;
    }
    for (node, &z) in res.circle_of_node.iter().enumerate() {
        let t = res2.circle_of_node[node];
        if t == t1 || t == t2 || z == source {
            continue;
        }
        if labels >> z & 1 == 1 {
            out |= 1 << t;
        }
    }
    emit(out);
}

#[allow(clippy::too_many_arguments)]
fn apply_entries(
    _d: &Diagram,
    state: u32,
    state2: u32,
    res: &Resolution,
    res2: &Resolution,
    i: i32,
    gradings: &BTreeMap<i32, Vec<i32>>,
    index: &HashMap<(u32, u32), usize>,
    differentials: &mut BTreeMap<i32, SparseF2>,
    transitions: &mut dyn FnMut(u32, &mut dyn FnMut(u32)),
) -> Result<(), KhError> {
    let free_bits: Vec<usize> = (0..res.circles).filter(|&c| res.marked != Some(c)).collect();
    let d_i = differentials.get_mut(&i).expect("differential slot");
    let _ = gradings;
    for assignment in 0..(1u32 << free_bits.len()) {
        let mut labels = 0u32;
        for (k, &c) in free_bits.iter().enumerate() {
            if assignment >> k & 1 == 1 {
                labels |= 1 << c;
            }
        }
        let row = index[&(state, labels)];
        let mut bad = None;
        transitions(labels, &mut |out: u32| {
            // reduced flavor: drop targets labelling the marked circle v+
            if let Some(m) = res2.marked {
                if out >> m & 1 == 1 {
                    bad = Some("marked circle labelled v+ in target".to_string());
                    return;
                }
            }
            match index.get(&(state2, out)) {
                Some(&col) => d_i.toggle(row, col),
                None => bad = Some("missing target generator".to_string()),
            }
        });
        if let Some(msg) = bad {
            return Err(KhError::BrokenComplex(msg));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use crate::kh::{graded_euler, homology_ranks};

    const TREFOIL: &str = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)";

    #[test]
    fn crossingless_unknot() {
        let d = Diagram::unknot();
        let c = cube_complex(&d, true).unwrap();
        let h = homology_ranks(&c).unwrap();
        assert_eq!(h.total, 1);
        assert_eq!(h.rank(0, 0), 1);
        let cu = cube_complex(&d, false).unwrap();
        let hu = homology_ranks(&cu).unwrap();
        assert_eq!(hu.total, 2);
        assert_eq!(hu.rank(0, 1), 1);
        assert_eq!(hu.rank(0, -1), 1);
    }

    #[test]
    fn kinks_are_unknots() {
        for pd in ["X(1,1,2,2)", "X(1,2,2,1)", "X(2,2,1,1)"] {
            let d = parse_pd(pd).unwrap();
            let h = homology_ranks(&cube_complex(&d, true).unwrap()).unwrap();
            assert_eq!(h.total, 1, "kink {pd}");
            assert_eq!(h.rank(0, 0), 1, "kink {pd}");
        }
    }

    #[test]
    fn trefoil_ranks() {
        let d = parse_pd(TREFOIL).unwrap();
        let h = homology_ranks(&cube_complex(&d, true).unwrap()).unwrap();
        assert_eq!(h.total, 3);
        // positive trefoil: generators at (0,2), (2,6), (3,8)
        assert_eq!(h.rank(0, 2), 1);
        assert_eq!(h.rank(2, 6), 1);
        assert_eq!(h.rank(3, 8), 1);
        let hu = homology_ranks(&cube_complex(&d, false).unwrap()).unwrap();
        assert_eq!(hu.total, 6);
    }

    #[test]
    fn cube_guard() {
        let d = crate::generators::torus_knot(2, 17).unwrap();
        assert!(matches!(cube_complex(&d, false), Err(KhError::CubeGuard(17, _))));
    }

    #[test]
    fn unreduced_double_and_euler() {
        for pd in ["X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)", "X(1,3,2,4) X(3,1,4,2)"] {
            let d = parse_pd(pd).unwrap();
            let hr = homology_ranks(&cube_complex(&d, true).unwrap()).unwrap();
            let hu = homology_ranks(&cube_complex(&d, false).unwrap()).unwrap();
            assert_eq!(hu.total, 2 * hr.total, "{pd}");
            // unreduced euler = (q + q^{-1}) * reduced euler
            let q = crate::laurent::LaurentPoly::from_terms([(-1, 1), (1, 1)]);
            assert_eq!(graded_euler(&hu), &q * &graded_euler(&hr), "{pd}");
        }
    }

    #[test]
    fn figure8_ranks() {
        let d = crate::generators::braid_closure(&[1, -2, 1, -2], 3).unwrap();
        let h = homology_ranks(&cube_complex(&d, true).unwrap()).unwrap();
        assert_eq!(h.total, 5);
    }

    #[test]
    fn basepoint_independence_small() {
        let d = parse_pd(TREFOIL).unwrap();
        let mut totals = Vec::new();
        for e in 1..=d.edge_count {
            let de = d.clone().with_basepoint(e).unwrap();
            totals.push(homology_ranks(&cube_complex(&de, true).unwrap()).unwrap().total);
        }
        assert!(totals.iter().all(|&t| t == 3));
    }
}
