//! Dual complexes of cell triangulations and their isomorphism test.

/// Graph with one node per tetrahedron: solid edges join tetrahedra sharing a
/// facet, dashed edges join tetrahedra with a facet on the same quad face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualComplex {
    solid: Vec<u64>,
    dashed: Vec<u64>,
}

/// Node count above which [`DualComplex::isomorphic`] gives up.
pub const MAX_ISO_NODES: usize = 10;

fn shares_facet(s: &[u32; 4], t: &[u32; 4]) -> bool {
    s.iter().filter(|v| t.contains(v)).count() == 3
}

fn on_face(t: &[u32; 4], q: &[u32; 4]) -> bool {
    t.iter().filter(|v| q.contains(v)).count() >= 3
}

impl DualComplex {
    /// Dual complex of `tets` relative to the quad faces `quads`. At most 64
    /// tetrahedra.
    pub fn new(tets: &[[u32; 4]], quads: &[[u32; 4]]) -> Self {
        assert!(
            tets.len() <= 64,
            "dual complex of {} tetrahedra",
            tets.len()
        );
        let n = tets.len();
        let mut solid = vec![0u64; n];
        let mut dashed = vec![0u64; n];
        for i in 0..n {
            for j in i + 1..n {
                if shares_facet(&tets[i], &tets[j]) {
                    solid[i] |= 1 << j;
                    solid[j] |= 1 << i;
                }
                if quads
                    .iter()
                    .any(|q| on_face(&tets[i], q) && on_face(&tets[j], q))
                {
                    dashed[i] |= 1 << j;
                    dashed[j] |= 1 << i;
                }
            }
        }
        DualComplex { solid, dashed }
    }

    pub fn num_nodes(&self) -> usize {
        self.solid.len()
    }

    pub fn num_solid_edges(&self) -> usize {
        self.solid
            .iter()
            .map(|m| m.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn num_dashed_edges(&self) -> usize {
        self.dashed
            .iter()
            .map(|m| m.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn solid(&self, i: usize, j: usize) -> bool {
        self.solid[i] >> j & 1 == 1
    }

    pub fn dashed(&self, i: usize, j: usize) -> bool {
        self.dashed[i] >> j & 1 == 1
    }

    /// Node signatures (solid degree, dashed degree), sorted.
    pub fn degrees(&self) -> Vec<(u32, u32)> {
        let mut d: Vec<(u32, u32)> = self
            .solid
            .iter()
            .zip(&self.dashed)
            .map(|(s, d)| (s.count_ones(), d.count_ones()))
            .collect();
        d.sort_unstable();
        d
    }

    /// Whether some node bijection maps solid edges to solid edges and dashed
    /// to dashed. `None` when the graphs are too large to decide.
    pub fn isomorphic(&self, other: &DualComplex) -> Option<bool> {
        let n = self.num_nodes();
        if n != other.num_nodes()
            || self.num_solid_edges() != other.num_solid_edges()
            || self.num_dashed_edges() != other.num_dashed_edges()
            || self.degrees() != other.degrees()
        {
            return Some(false);
        }
        if n > MAX_ISO_NODES {
            return None;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = 0u64;
        Some(self.extend(other, 0, &mut map, &mut used))
    }

    fn extend(&self, other: &DualComplex, i: usize, map: &mut [usize], used: &mut u64) -> bool {
        let n = map.len();
        if i == n {
            return true;
        }
        let sig = (self.solid[i].count_ones(), self.dashed[i].count_ones());
        for j in 0..n {
            if *used >> j & 1 == 1
                || (other.solid[j].count_ones(), other.dashed[j].count_ones()) != sig
            {
                continue;
            }
            let consistent = (0..i).all(|k| {
                self.solid(i, k) == other.solid(j, map[k])
                    && self.dashed(i, k) == other.dashed(j, map[k])
            });
            if !consistent {
                continue;
            }
            map[i] = j;
            *used |= 1 << j;
            if self.extend(other, i + 1, map, used) {
                return true;
            }
            *used &= !(1 << j);
        }
        map[i] = usize::MAX;
        false
    }

    /// The same graph with node `i` renamed `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> DualComplex {
        let n = self.num_nodes();
        let mut solid = vec![0u64; n];
        let mut dashed = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                if self.solid(i, j) {
                    solid[perm[i]] |= 1 << perm[j];
                }
                if self.dashed(i, j) {
                    dashed[perm[i]] |= 1 << perm[j];
                }
            }
        }
        DualComplex { solid, dashed }
    }

    /// Whether the solid graph has a cycle.
    pub fn has_solid_cycle(&self) -> bool {
        let n = self.num_nodes();
        let components = {
            let mut seen = 0u64;
            let mut c = 0;
            for s in 0..n {
                if seen >> s & 1 == 1 {
                    continue;
                }
                c += 1;
                let mut stack = vec![s];
                seen |= 1 << s;
                while let Some(u) = stack.pop() {
                    let mut m = self.solid[u] & !seen;
                    while m != 0 {
                        let v = m.trailing_zeros() as usize;
                        m &= m - 1;
                        seen |= 1 << v;
                        stack.push(v);
                    }
                }
            }
            c
        };
        self.num_solid_edges() + components > n
    }
}
