//! Point sets, clusterings, the k-means potential and closed-form potential
//! changes for merging sets and moving single points.
//!
//! A [`Clustering`] caches per-cluster sizes and coordinate *sums*. Sums stay
//! exact under incremental updates in rational mode; centers are derived on
//! demand as `sum / size`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered, non-empty collection of `d`-dimensional points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<S> {
    dim: usize,
    coords: Vec<S>,
}

impl<S: Scalar> PointSet<S> {
    pub fn new(dim: usize, coords: Vec<S>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::precondition("dimension must be positive"));
        }
        if coords.is_empty() {
            return Err(Error::precondition(
                "point set must contain at least one point",
            ));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: coords.len() % dim,
            });
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            coords.extend(row);
        }
        Self::new(dim, coords)
    }

    /// Points on the line.
    pub fn from_line(values: Vec<S>) -> Result<Self> {
        Self::new(1, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always `false`; kept for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, id: usize) -> &[S] {
        &self.coords[id * self.dim..(id + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[S]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> PointSet<T> {
        PointSet {
            dim: self.dim,
            coords: self.coords.iter().map(&mut f).collect(),
        }
    }

    /// Sum of the points with the given ids.
    pub fn sum_of(&self, ids: &[usize]) -> Vec<S> {
        let mut sum = vec![S::zero(); self.dim];
        for &id in ids {
            add_assign(&mut sum, self.point(id));
        }
        sum
    }
}

pub(crate) fn add_assign<S: Scalar>(acc: &mut [S], v: &[S]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = a.clone() + b.clone();
    }
}

pub(crate) fn sub_assign<S: Scalar>(acc: &mut [S], v: &[S]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = a.clone() - b.clone();
    }
}

pub fn sq_dist<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| {
        let diff = x.clone() - y.clone();
        acc + diff.clone() * diff
    })
}

pub fn scale<S: Scalar>(v: &[S], factor: &S) -> Vec<S> {
    v.iter().map(|x| x.clone() * factor.clone()).collect()
}

/// Assignment of every point to one of `k` non-empty clusters.
#[derive(Clone, Debug, PartialEq)]
pub struct Clustering<S> {
    k: usize,
    dim: usize,
    assign: Vec<usize>,
    size: Vec<usize>,
    coordsum: Vec<S>,
}

impl<S: Scalar> Clustering<S> {
    /// Builds a clustering from an explicit assignment. Every cluster must
    /// receive at least one point.
    pub fn new(points: &PointSet<S>, k: usize, assign: Vec<usize>) -> Result<Self> {
        let n = points.len();
        if k == 0 || k > n {
            return Err(Error::InvalidK { k, n });
        }
        if assign.len() != n {
            return Err(Error::precondition(format!(
                "assignment has {} entries for {} points",
                assign.len(),
                n
            )));
        }
        if let Some(&bad) = assign.iter().find(|&&c| c >= k) {
            return Err(Error::OutOfRange {
                index: bad,
                limit: k,
            });
        }
        let dim = points.dim();
        let mut size = vec![0; k];
        let mut coordsum = vec![S::zero(); k * dim];
        for (id, &c) in assign.iter().enumerate() {
            size[c] += 1;
            add_assign(&mut coordsum[c * dim..(c + 1) * dim], points.point(id));
        }
        if let Some(cluster) = size.iter().position(|&s| s == 0) {
            return Err(Error::EmptyCluster { cluster });
        }
        Ok(Self {
            k,
            dim,
            assign,
            size,
            coordsum,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.assign.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn cluster_of(&self, point: usize) -> usize {
        self.assign[point]
    }

    pub fn size(&self, cluster: usize) -> usize {
        self.size[cluster]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.size
    }

    pub fn coordsum(&self, cluster: usize) -> &[S] {
        &self.coordsum[cluster * self.dim..(cluster + 1) * self.dim]
    }

    /// Point ids of one cluster in ascending order.
    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.assign
            .iter()
            .enumerate()
            .filter_map(|(id, &c)| (c == cluster).then_some(id))
            .collect()
    }

    /// Moves `point` to `dst`, updating sizes and sums in O(d).
    ///
    /// Refuses to empty the source cluster.
    pub fn apply_move(&mut self, points: &PointSet<S>, point: usize, dst: usize) -> Result<()> {
        if point >= self.n() {
            return Err(Error::OutOfRange {
                index: point,
                limit: self.n(),
            });
        }
        if dst >= self.k {
            return Err(Error::OutOfRange {
                index: dst,
                limit: self.k,
            });
        }
        let src = self.assign[point];
        if src == dst {
            return Err(Error::SameCluster { cluster: src });
        }
        if self.size[src] < 2 {
            return Err(Error::SingletonSource {
                point,
                cluster: src,
            });
        }
        let d = self.dim;
        let x = points.point(point);
        sub_assign(&mut self.coordsum[src * d..(src + 1) * d], x);
        add_assign(&mut self.coordsum[dst * d..(dst + 1) * d], x);
        self.size[src] -= 1;
        self.size[dst] += 1;
        self.assign[point] = dst;
        Ok(())
    }

    /// Checks the cached sizes and sums against a recomputation from the
    /// assignment (exact equality in rational mode, relative tolerance for
    /// floats).
    pub fn is_consistent(&self, points: &PointSet<S>) -> bool {
        match Clustering::new(points, self.k, self.assign.clone()) {
            Ok(fresh) => {
                fresh.size == self.size
                    && fresh
                        .coordsum
                        .iter()
                        .zip(&self.coordsum)
                        .all(|(a, b)| a.approx_eq(b))
            }
            Err(_) => false,
        }
    }
}

/// Center of mass of one cluster.
pub fn center_of_mass<S: Scalar>(cluster: usize, clustering: &Clustering<S>) -> Result<Vec<S>> {
    if cluster >= clustering.k() {
        return Err(Error::OutOfRange {
            index: cluster,
            limit: clustering.k(),
        });
    }
    let size = clustering.size(cluster);
    if size == 0 {
        return Err(Error::EmptyCluster { cluster });
    }
    let inv = S::one() / S::from_count(size);
    Ok(scale(clustering.coordsum(cluster), &inv))
}

/// Center of mass of an explicit multiset of point ids.
pub fn center_of_ids<S: Scalar>(points: &PointSet<S>, ids: &[usize]) -> Result<Vec<S>> {
    if ids.is_empty() {
        return Err(Error::precondition("center of an empty set"));
    }
    let inv = S::one() / S::from_count(ids.len());
    Ok(scale(&points.sum_of(ids), &inv))
}

/// Φ of a multiset of point ids, by direct evaluation.
pub fn set_potential<S: Scalar>(points: &PointSet<S>, ids: &[usize]) -> S {
    match center_of_ids(points, ids) {
        Ok(center) => ids.iter().fold(S::zero(), |acc, &id| {
            acc + sq_dist(points.point(id), &center)
        }),
        Err(_) => S::zero(),
    }
}

/// Φ of one cluster.
pub fn cluster_potential<S: Scalar>(
    cluster: usize,
    clustering: &Clustering<S>,
    points: &PointSet<S>,
) -> Result<S> {
    let center = center_of_mass(cluster, clustering)?;
    Ok(clustering
        .assignment()
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c == cluster)
        .fold(S::zero(), |acc, (id, _)| {
            acc + sq_dist(points.point(id), &center)
        }))
}

/// The k-means objective: summed squared distance of every point to its
/// cluster's center of mass.
pub fn potential<S: Scalar>(clustering: &Clustering<S>, points: &PointSet<S>) -> S {
    let centers: Vec<Vec<S>> = (0..clustering.k())
        .map(|c| center_of_mass(c, clustering).expect("valid clustering has no empty cluster"))
        .collect();
    clustering
        .assignment()
        .iter()
        .enumerate()
        .fold(S::zero(), |acc, (id, &c)| {
            acc + sq_dist(points.point(id), &centers[c])
        })
}

/// Potential increase caused by merging two disjoint multisets:
/// `|S||T|/(|S|+|T|) * ||cm(S) - cm(T)||^2`.
pub fn merge_delta<S: Scalar>(points: &PointSet<S>, s: &[usize], t: &[usize]) -> Result<S> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::precondition("merge_delta needs two non-empty sets"));
    }
    let cs = center_of_ids(points, s)?;
    let ct = center_of_ids(points, t)?;
    let (ns, nt) = (S::from_count(s.len()), S::from_count(t.len()));
    let weight = ns.clone() * nt.clone() / (ns + nt);
    Ok(weight * sq_dist(&cs, &ct))
}

/// Gain of moving a point of a cluster with `size_src` members and
/// (hypothetical) center `a` into a cluster with `size_dst` members and
/// center `b`. Positive means the potential decreases.
pub fn gain_with_centers<S: Scalar>(
    x: &[S],
    a: &[S],
    b: &[S],
    size_src: usize,
    size_dst: usize,
) -> Result<S> {
    if size_src < 2 {
        return Err(Error::precondition(format!(
            "source size must be at least 2, got {size_src}"
        )));
    }
    if size_dst < 1 {
        return Err(Error::precondition("target cluster must be non-empty"));
    }
    let ns = S::from_count(size_src);
    let nt = S::from_count(size_dst);
    let leave = ns.clone() / (ns - S::one()) * sq_dist(x, a);
    let join = nt.clone() / (nt + S::one()) * sq_dist(x, b);
    Ok(leave - join)
}

/// Gain of reassigning `point` from `src` to `dst`, computed from the cached
/// sums. Equals `Φ(before) - Φ(after)`.
pub fn move_gain<S: Scalar>(
    point: usize,
    src: usize,
    dst: usize,
    clustering: &Clustering<S>,
    points: &PointSet<S>,
) -> Result<S> {
    if src == dst {
        return Err(Error::SameCluster { cluster: src });
    }
    if clustering.cluster_of(point) != src {
        return Err(Error::NotInCluster {
            point,
            cluster: src,
        });
    }
    if clustering.size(src) < 2 {
        return Err(Error::SingletonSource {
            point,
            cluster: src,
        });
    }
    let a = center_of_mass(src, clustering)?;
    let b = center_of_mass(dst, clustering)?;
    gain_with_centers(
        points.point(point),
        &a,
        &b,
        clustering.size(src),
        clustering.size(dst),
    )
}

/// Gain of moving `x` (a member of `from`) out of the multiset `from` into
/// the multiset `to`, both given as explicit point ids.
pub fn set_move_gain<S: Scalar>(
    points: &PointSet<S>,
    x: usize,
    from: &[usize],
    to: &[usize],
) -> Result<S> {
    if !from.contains(&x) {
        return Err(Error::precondition(format!(
            "point {x} is not in the source set"
        )));
    }
    let a = center_of_ids(points, from)?;
    let b = center_of_ids(points, to)?;
    gain_with_centers(points.point(x), &a, &b, from.len(), to.len())
}

/// Potential change from adding `x` to a non-empty set `t`:
/// `|T|/(|T|+1) * ||x - cm(T)||^2`, never negative. Emptying a singleton
/// therefore never improves the potential.
pub fn join_cost<S: Scalar>(points: &PointSet<S>, t: &[usize], x: &[S]) -> Result<S> {
    let center = center_of_ids(points, t)?;
    let nt = S::from_count(t.len());
    Ok(nt.clone() / (nt + S::one()) * sq_dist(x, &center))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, rational, Rational};

    fn line(values: &[i64]) -> PointSet<Rational> {
        PointSet::from_line(values.iter().map(|&v| rational(v)).collect()).unwrap()
    }

    #[test]
    fn centers_of_mass() {
        let pts = line(&[9, 5, 13, 6]);
        let c = Clustering::new(&pts, 2, vec![0, 1, 1, 1]).unwrap();
        assert_eq!(center_of_mass(0, &c).unwrap(), vec![rational(9)]);
        assert_eq!(center_of_mass(1, &c).unwrap(), vec![rational(8)]);

        let pts = PointSet::from_line(vec![ratio(1, 5), rational(1)]).unwrap();
        assert_eq!(center_of_ids(&pts, &[0, 1]).unwrap(), vec![ratio(3, 5)]);
    }

    #[test]
    fn empty_clusters_are_rejected() {
        let pts = line(&[0, 1, 2]);
        assert!(matches!(
            Clustering::new(&pts, 2, vec![0, 0, 0]),
            Err(Error::EmptyCluster { cluster: 1 })
        ));
        assert!(matches!(
            Clustering::new(&pts, 4, vec![0, 1, 2]),
            Err(Error::InvalidK { k: 4, n: 3 })
        ));
        assert!(center_of_ids(&pts, &[]).is_err());
    }

    #[test]
    fn potentials() {
        let pts = line(&[0, 2]);
        let single = Clustering::new(&pts, 1, vec![0, 0]).unwrap();
        assert_eq!(potential(&single, &pts), rational(2));
        let apart = Clustering::new(&pts, 2, vec![0, 1]).unwrap();
        assert_eq!(potential(&apart, &pts), rational(0));

        let pts = line(&[5, 13, 6, 9]);
        let c = Clustering::new(&pts, 2, vec![0, 0, 0, 1]).unwrap();
        assert_eq!(potential(&c, &pts), rational(38));
        assert_eq!(cluster_potential(0, &c, &pts).unwrap(), rational(38));
        assert_eq!(cluster_potential(1, &c, &pts).unwrap(), rational(0));
    }

    #[test]
    fn merge_delta_examples() {
        let pts = line(&[0, 2, 4]);
        assert_eq!(merge_delta(&pts, &[0], &[1]).unwrap(), rational(2));
        assert_eq!(merge_delta(&pts, &[0, 1], &[2]).unwrap(), rational(6));
        assert_eq!(merge_delta(&pts, &[0, 2], &[1]).unwrap(), rational(0));
        assert!(merge_delta(&pts, &[], &[1]).is_err());
    }

    #[test]
    fn move_gain_examples() {
        let pts = line(&[0, 2, 5]);
        let c = Clustering::new(&pts, 2, vec![0, 0, 1]).unwrap();
        assert_eq!(move_gain(1, 0, 1, &c, &pts).unwrap(), ratio(-5, 2));

        // q leaving {b, q} for {a, p} in the unit gadget.
        let pts = line(&[6, 13, 9, 5]);
        let c = Clustering::new(&pts, 2, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(move_gain(1, 0, 1, &c, &pts).unwrap(), ratio(1, 2));

        // x equal to both centers.
        let pts = line(&[1, 1, 1]);
        let c = Clustering::new(&pts, 2, vec![0, 0, 1]).unwrap();
        assert_eq!(move_gain(0, 0, 1, &c, &pts).unwrap(), rational(0));
    }

    #[test]
    fn move_gain_errors() {
        let pts = line(&[0, 2, 5]);
        let c = Clustering::new(&pts, 2, vec![0, 0, 1]).unwrap();
        assert!(matches!(
            move_gain(2, 1, 0, &c, &pts),
            Err(Error::SingletonSource {
                point: 2,
                cluster: 1
            })
        ));
        assert!(matches!(
            move_gain(0, 1, 0, &c, &pts),
            Err(Error::NotInCluster {
                point: 0,
                cluster: 1
            })
        ));
        assert!(matches!(
            move_gain(0, 0, 0, &c, &pts),
            Err(Error::SameCluster { .. })
        ));
    }

    #[test]
    fn gain_with_centers_examples() {
        let g = gain_with_centers(&[rational(5)], &[ratio(13, 5)], &[rational(9)], 2, 1).unwrap();
        assert_eq!(g, ratio(88, 25));
        let x = [rational(3)];
        assert_eq!(gain_with_centers(&x, &x, &x, 4, 7).unwrap(), rational(0));
        assert!(gain_with_centers(&x, &x, &x, 1, 1).is_err());
    }

    #[test]
    fn apply_move_keeps_sums() {
        let pts = line(&[0, 1, 10]);
        let mut c = Clustering::new(&pts, 2, vec![0, 1, 0]).unwrap();
        c.apply_move(&pts, 2, 1).unwrap();
        assert_eq!(c.sizes(), &[1, 2]);
        assert_eq!(c.coordsum(1), &[rational(11)]);
        assert!(c.is_consistent(&pts));
        assert!(matches!(
            c.apply_move(&pts, 0, 1),
            Err(Error::SingletonSource { .. })
        ));
    }

    #[test]
    fn join_cost_is_nonnegative() {
        let pts = line(&[0, 4]);
        assert_eq!(
            join_cost(&pts, &[0, 1], &[rational(2)]).unwrap(),
            rational(0)
        );
        assert_eq!(join_cost(&pts, &[0], &[rational(3)]).unwrap(), ratio(9, 2));
    }
}
