//! Single-linkage clustering of point clouds.

use serde::Serialize;

use super::region::distance;

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Partition of point indices. Clusters are listed in canonical order (by
/// their lexicographically smallest member) and each cluster's indices are
/// sorted by that same point order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clustering {
    pub h: f64,
    pub clusters: Vec<Vec<usize>>,
}

impl Clustering {
    pub fn count(&self) -> usize {
        self.clusters.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(Vec::len).collect()
    }
}

/// Connected components of the graph joining points at distance ≤ h.
/// Candidate pairs come from a sweep along the coordinate of largest
/// spread, so well-separated clouds cost close to n log n.
pub fn single_linkage(points: &[Vec<f64>], h: f64) -> Clustering {
    assert!(h > 0.0, "linkage radius must be positive");
    let n = points.len();
    let mut uf = UnionFind::new(n);
    if n > 0 {
        let dim = points[0].len();
        let axis = (0..dim)
            .max_by(|&a, &b| {
                let spread = |j: usize| {
                    let (lo, hi) = points
                        .iter()
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[j]), hi.max(p[j])));
                    hi - lo
                };
                spread(a).total_cmp(&spread(b)).then(b.cmp(&a))
            })
            .unwrap_or(0);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| points[a][axis].total_cmp(&points[b][axis]).then(a.cmp(&b)));
        for (s, &i) in order.iter().enumerate() {
            for &j in &order[s + 1..] {
                if points[j][axis] - points[i][axis] > h {
                    break;
                }
                if distance(&points[i], &points[j]) <= h {
                    uf.union(i, j);
                }
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = uf.find(i);
        by_root.entry(r).or_default().push(i);
    }
    let mut clusters: Vec<Vec<usize>> = by_root.into_values().collect();
    for c in &mut clusters {
        c.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]).then(a.cmp(&b)));
    }
    clusters.sort_by(|a, b| lex_cmp(&points[a[0]], &points[b[0]]).then(a[0].cmp(&b[0])));
    Clustering { h, clusters }
}

/// Median distance from each point to its nearest other point; `None` for
/// fewer than two points.
pub fn median_nn_distance(points: &[Vec<f64>]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let mut nn: Vec<f64> = (0..points.len())
        .map(|i| {
            points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| distance(&points[i], q))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    nn.sort_by(f64::total_cmp);
    Some(nn[nn.len() / 2])
}

/// Cluster counts at h/2, h and 2h. Only clusters with at least
/// `min_size` points are counted, so stray points in sparse regions do not
/// break an otherwise stable count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlateauScan {
    pub h: f64,
    pub counts: [usize; 3],
    pub stable: bool,
}

impl Clustering {
    pub fn count_at_least(&self, min_size: usize) -> usize {
        self.clusters.iter().filter(|c| c.len() >= min_size).count()
    }
}

pub fn plateau_scan(points: &[Vec<f64>], h: f64, min_size: usize) -> PlateauScan {
    let counts = [0.5, 1.0, 2.0].map(|f| single_linkage(points, f * h).count_at_least(min_size));
    PlateauScan {
        h,
        counts,
        stable: counts[0] == counts[1] && counts[1] == counts[2],
    }
}

/// Starting at `h0`, grows the linkage radius by √2 until the (h/2, h, 2h)
/// counts agree or 2h would exceed `h_max`. Returns every scan made; the
/// last one is the answer.
pub fn find_plateau(points: &[Vec<f64>], h0: f64, h_max: f64, min_size: usize) -> Vec<PlateauScan> {
    let mut scans = Vec::new();
    let mut h = h0;
    loop {
        let s = plateau_scan(points, h, min_size);
        let stable = s.stable;
        scans.push(s);
        let next = h * std::f64::consts::SQRT_2;
        if stable || 2.0 * next > h_max {
            return scans;
        }
        h = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_lines() -> Vec<Vec<f64>> {
        let mut pts = Vec::new();
        for k in 0..=20 {
            let t = -0.1 + 0.01 * k as f64;
            pts.push(vec![0.0, 0.1, t]);
            pts.push(vec![0.0, -0.1, t]);
        }
        pts
    }

    #[test]
    fn parallel_segments_are_two_clusters() {
        let c = single_linkage(&two_lines(), 0.03);
        assert_eq!(c.count(), 2);
        assert_eq!(c.sizes(), vec![21, 21]);
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(single_linkage(&[vec![1.0, 2.0]], 0.1).count(), 1);
        assert_eq!(single_linkage(&two_lines(), 10.0).count(), 1);
        assert_eq!(single_linkage(&[], 0.1).count(), 0);
    }

    #[test]
    fn canonical_order_ignores_input_order() {
        let pts = two_lines();
        let mut rev = pts.clone();
        rev.reverse();
        let a = single_linkage(&pts, 0.03);
        let b = single_linkage(&rev, 0.03);
        let as_points = |c: &Clustering, p: &[Vec<f64>]| {
            c.clusters
                .iter()
                .map(|cl| cl.iter().map(|&i| p[i].clone()).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        assert_eq!(as_points(&a, &pts), as_points(&b, &rev));
    }

    #[test]
    fn plateau_on_grid() {
        let pts = two_lines();
        let h = 3.0 * median_nn_distance(&pts).unwrap();
        let scans = find_plateau(&pts, h, 1.0, 1);
        let last = scans.last().unwrap();
        assert!(last.stable);
        assert_eq!(last.counts, [2, 2, 2]);
    }

    #[test]
    fn small_clusters_are_not_counted() {
        let mut pts = two_lines();
        pts.push(vec![5.0, 5.0, 5.0]);
        let c = single_linkage(&pts, 0.03);
        assert_eq!(c.count(), 3);
        assert_eq!(c.count_at_least(2), 2);
        assert!(plateau_scan(&pts, 0.03, 2).stable);
    }
}
