//! Static kd-tree over 3D points for nearest-neighbor queries.

use nalgebra::Vector3;

struct Node {
    /// Index into the point array.
    point: u32,
    axis: u8,
    left: i32,
    right: i32,
}

/// Immutable kd-tree built once over a point set.
pub struct KdTree3 {
    points: Vec<Vector3<f64>>,
    nodes: Vec<Node>,
    root: i32,
}

impl KdTree3 {
    pub fn build(points: &[Vector3<f64>]) -> Self {
        let mut indices: Vec<u32> = (0..points.len() as u32).collect();
        let mut tree = Self {
            points: points.to_vec(),
            nodes: Vec::with_capacity(points.len()),
            root: -1,
        };
        tree.root = tree.build_recursive(&mut indices, 0);
        tree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, index: usize) -> &Vector3<f64> {
        &self.points[index]
    }

    fn build_recursive(&mut self, indices: &mut [u32], depth: usize) -> i32 {
        if indices.is_empty() {
            return -1;
        }
        let axis = (depth % 3) as u8;
        // Deterministic split: order by coordinate, then by index.
        indices.sort_unstable_by(|&a, &b| {
            let ca = self.points[a as usize][axis as usize];
            let cb = self.points[b as usize][axis as usize];
            ca.total_cmp(&cb).then(a.cmp(&b))
        });
        let mid = indices.len() / 2;
        let point = indices[mid];
        let (left_slice, rest) = indices.split_at_mut(mid);
        let right_slice = &mut rest[1..];
        // Build children before pushing the node to keep borrows simple.
        let mut left_copy = left_slice.to_vec();
        let mut right_copy = right_slice.to_vec();
        let left = self.build_recursive(&mut left_copy, depth + 1);
        let right = self.build_recursive(&mut right_copy, depth + 1);
        self.nodes.push(Node {
            point,
            axis,
            left,
            right,
        });
        (self.nodes.len() - 1) as i32
    }

    /// Index and squared distance of the nearest point to `query`.
    pub fn nearest(&self, query: &Vector3<f64>) -> Option<(usize, f64)> {
        if self.root < 0 {
            return None;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(self.root, query, &mut best);
        Some(best)
    }

    fn search(&self, node_idx: i32, query: &Vector3<f64>, best: &mut (usize, f64)) {
        if node_idx < 0 {
            return;
        }
        let node = &self.nodes[node_idx as usize];
        let point = &self.points[node.point as usize];
        let d2 = (point - query).norm_squared();
        if d2 < best.1 || (d2 == best.1 && (node.point as usize) < best.0) {
            *best = (node.point as usize, d2);
        }
        let axis = node.axis as usize;
        let delta = query[axis] - point[axis];
        let (near, far) = if delta < 0.0 {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        self.search(near, query, best);
        if delta * delta < best.1 {
            self.search(far, query, best);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let points: Vec<Vector3<f64>> = (0..500)
            .map(|_| {
                Vector3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                )
            })
            .collect();
        let tree = KdTree3::build(&points);
        for _ in 0..200 {
            let q = Vector3::new(
                rng.random_range(-1.2..1.2),
                rng.random_range(-1.2..1.2),
                rng.random_range(-1.2..1.2),
            );
            let (idx, d2) = tree.nearest(&q).unwrap();
            let brute = points
                .iter()
                .enumerate()
                .map(|(i, p)| (i, (p - q).norm_squared()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!((d2 - brute.1).abs() < 1e-15);
            assert!((points[idx] - points[brute.0]).norm() < 1e-15);
        }
    }

    #[test]
    fn empty_tree_returns_none() {
        let tree = KdTree3::build(&[]);
        assert!(tree.nearest(&Vector3::zeros()).is_none());
    }
}
