//! Purely combinatorial enumerators over a label set, without any mesh.

fn sorted_unique(v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Every ordered 4-tuple of distinct labels.
pub fn enumerate_4_permutations(labels: &[u32]) -> Vec<[u32; 4]> {
    let v = sorted_unique(labels);
    let mut out = Vec::new();
    for &a in &v {
        for &b in &v {
            if b == a {
                continue;
            }
            for &c in &v {
                if c == a || c == b {
                    continue;
                }
                for &d in &v {
                    if d != a && d != b && d != c {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Each cyclic quadrilateral `abcd` once, using `a < b`, `a < c`, `b < d`.
pub fn enumerate_unique_quads(labels: &[u32]) -> Vec<[u32; 4]> {
    enumerate_4_permutations(labels)
        .into_iter()
        .filter(|&[a, b, c, d]| a < b && a < c && b < d)
        .collect()
}

fn hexes(labels: &[u32], oriented: bool) -> Vec<[u32; 8]> {
    let v = sorted_unique(labels);
    let mut out = Vec::new();
    for &a in &v {
        for &b in v.iter().filter(|&&b| b > a) {
            for &d in v.iter().filter(|&&d| d > b) {
                for &e in v.iter().filter(|&&e| e > b && e != d) {
                    if !oriented && e < d {
                        continue;
                    }
                    let used = [b, d, e];
                    for &c in v.iter().filter(|&&c| c > a && !used.contains(&c)) {
                        let used = [b, d, e, c];
                        for &f in v.iter().filter(|&&f| f > a && !used.contains(&f)) {
                            let used = [b, d, e, c, f];
                            for &h in v.iter().filter(|&&h| h > a && !used.contains(&h)) {
                                let used = [b, d, e, c, f, h];
                                for &g in v.iter().filter(|&&g| g > a && !used.contains(&g)) {
                                    out.push([a, b, c, d, e, f, g, h]);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Each oriented hexahedron on the label set once, as `abcdefgh` tuples.
pub fn enumerate_oriented_hexes(labels: &[u32]) -> Vec<[u32; 8]> {
    hexes(labels, true)
}

/// Like [`enumerate_oriented_hexes`] with the extra constraint `e > d`, which
/// keeps one of each mirror pair.
pub fn enumerate_unoriented_hexes(labels: &[u32]) -> Vec<[u32; 8]> {
    hexes(labels, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::{automorphisms, CanonicalKey, CellKind};
    use std::collections::BTreeSet;

    fn quad_class(q: [u32; 4]) -> [u32; 4] {
        // dihedral group of the square
        let mut best = q;
        for r in 0..4 {
            let rot = [q[r], q[(r + 1) % 4], q[(r + 2) % 4], q[(r + 3) % 4]];
            let rev = [rot[0], rot[3], rot[2], rot[1]];
            best = best.min(rot).min(rev);
        }
        best
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(enumerate_4_permutations(&[1, 2, 3, 4]).len(), 24);
        assert_eq!(enumerate_4_permutations(&[1, 2, 3, 4, 5]).len(), 120);
        assert!(enumerate_4_permutations(&[1, 2, 3]).is_empty());
    }

    #[test]
    fn unique_quads_of_four_labels() {
        assert_eq!(
            enumerate_unique_quads(&[1, 2, 3, 4]),
            vec![[1, 2, 3, 4], [1, 2, 4, 3], [1, 3, 2, 4]]
        );
        assert_eq!(enumerate_unique_quads(&[1, 2, 3, 4, 5]).len(), 15);
        assert!(enumerate_unique_quads(&[1, 2, 3]).is_empty());
    }

    #[test]
    fn unique_quads_match_deduplicated_permutations() {
        for n in 4..=6u32 {
            let labels: Vec<u32> = (1..=n).collect();
            let brute: BTreeSet<[u32; 4]> = enumerate_4_permutations(&labels)
                .into_iter()
                .map(quad_class)
                .collect();
            let fast = enumerate_unique_quads(&labels);
            let fast_set: BTreeSet<[u32; 4]> = fast.iter().copied().map(quad_class).collect();
            assert_eq!(fast.len(), fast_set.len());
            assert_eq!(brute, fast_set);
        }
    }

    #[test]
    fn hex_counts() {
        let v: Vec<u32> = (1..=8).collect();
        let oriented = enumerate_oriented_hexes(&v);
        assert_eq!(oriented.len(), 1680);
        assert_eq!(enumerate_unoriented_hexes(&v).len(), 840);
        let keys: BTreeSet<CanonicalKey> = oriented
            .iter()
            .map(|h| CanonicalKey::new(CellKind::Hexahedron, h))
            .collect();
        assert_eq!(keys.len(), 1680);
        // 8! / 24 orbits
        assert_eq!(40320 / 1680, 24);
        let v9: Vec<u32> = (1..=9).collect();
        assert_eq!(enumerate_oriented_hexes(&v9).len(), 9 * 1680);
    }

    #[test]
    fn unoriented_hexes_are_distinct_up_to_mirrors() {
        let v: Vec<u32> = (1..=8).collect();
        let mut seen = BTreeSet::new();
        for h in enumerate_unoriented_hexes(&v) {
            let best = automorphisms(CellKind::Hexahedron)
                .iter()
                .map(|p| p.iter().map(|&i| h[i as usize]).collect::<Vec<_>>())
                .min()
                .unwrap();
            assert!(seen.insert(best));
        }
    }
}
