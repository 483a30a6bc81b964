//! Point-cloud containers, plane fitting, mirror reflection and the rigid
//! camera-to-body transform.
//!
//! The body coordinate system is right-handed with the y-axis normal to the
//! treadmill (pointing up through the body), the x-axis along the walking
//! direction and the z-axis left-to-right. Its origin sits at the centroid of
//! the body cloud.

use nalgebra::{Matrix3, Point3, Unit, Vector3};

use crate::error::{Error, Result};

/// Coordinate frame a cloud is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Raw sensor coordinates.
    Camera,
    /// Treadmill-aligned, centroid-origin coordinates.
    Body,
}

/// One frame's set of 3D points, tagged with its coordinate frame.
///
/// Construction rejects empty clouds and non-finite coordinates, so every
/// `PointCloud` holds at least one fully finite point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Point3<f64>>,
    frame: Frame,
}

impl PointCloud {
    pub fn new(points: Vec<Point3<f64>>, frame: Frame) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput("point cloud"));
        }
        for (index, p) in points.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                return Err(Error::NonFinitePoint { index });
            }
        }
        Ok(Self { points, frame })
    }

    pub fn points(&self) -> &[Point3<f64>] {
        &self.points
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn centroid(&self) -> Point3<f64> {
        let sum: Vector3<f64> = self.points.iter().map(|p| p.coords).sum();
        Point3::from(sum / self.points.len() as f64)
    }

    fn require_frame(&self, expected: Frame) -> Result<()> {
        if self.frame != expected {
            return Err(Error::FrameMismatch {
                expected,
                got: self.frame,
            });
        }
        Ok(())
    }
}

/// A plane in Hessian normal form: `n . p + d = 0` with `|n| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    normal: Unit<Vector3<f64>>,
    offset: f64,
}

impl Plane {
    /// Builds a plane from a (not necessarily unit) normal and offset.
    pub fn new(normal: Vector3<f64>, offset: f64) -> Result<Self> {
        let norm = normal.norm();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::DegenerateGeometry(
                "plane normal has (near-)zero length".into(),
            ));
        }
        Ok(Self {
            normal: Unit::new_normalize(normal),
            offset: offset / norm,
        })
    }

    /// Plane through a point with the given normal direction.
    pub fn from_point_normal(point: Point3<f64>, normal: Vector3<f64>) -> Result<Self> {
        let unit = Unit::new_normalize(normal);
        let offset = -unit.dot(&point.coords);
        Plane::new(unit.into_inner(), offset)
    }

    pub fn normal(&self) -> Vector3<f64> {
        self.normal.into_inner()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed distance of `p` from the plane (positive on the normal side).
    pub fn signed_distance(&self, p: &Point3<f64>) -> f64 {
        self.normal.dot(&p.coords) + self.offset
    }

    /// Mirror image of `p`: `p - 2 (n . p + d) n`.
    pub fn reflect_point(&self, p: &Point3<f64>) -> Point3<f64> {
        p - 2.0 * self.signed_distance(p) * self.normal.into_inner()
    }

    /// Flips the normal (and offset) so `toward` lies on the positive side.
    /// Points exactly on the plane leave the orientation unchanged.
    pub fn oriented_toward(self, toward: &Point3<f64>) -> Self {
        if self.signed_distance(toward) < 0.0 {
            Self {
                normal: Unit::new_unchecked(-self.normal.into_inner()),
                offset: -self.offset,
            }
        } else {
            self
        }
    }
}

/// Result of a least-squares plane fit.
#[derive(Debug, Clone, Copy)]
pub struct PlaneFit {
    pub plane: Plane,
    /// Root-mean-square orthogonal residual of the markers, meters.
    pub rms: f64,
}

/// Rigid transform from the camera frame to the body frame.
///
/// Applying it maps `p_cam` to `R * p_cam + t`; the rotation is orthonormal
/// and right-handed by construction (checked on `new`).
#[derive(Debug, Clone, PartialEq)]
pub struct BodyFrame {
    rotation: Matrix3<f64>,
    translation: Vector3<f64>,
}

const ORTHONORMAL_TOL: f64 = 1e-9;

impl BodyFrame {
    /// Validates orthonormality (`R^T R = I`) and right-handedness
    /// (`det R = +1`), both within 1e-9.
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self> {
        let gram = rotation.transpose() * rotation;
        let dev = (gram - Matrix3::identity()).abs().max();
        if dev > ORTHONORMAL_TOL {
            return Err(Error::DegenerateGeometry(format!(
                "rotation is not orthonormal (deviation {dev:.3e})"
            )));
        }
        let det = rotation.determinant();
        if (det - 1.0).abs() > ORTHONORMAL_TOL {
            return Err(Error::DegenerateGeometry(format!(
                "rotation is not right-handed (det = {det})"
            )));
        }
        Ok(Self {
            rotation,
            translation,
        })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vector3<f64> {
        &self.translation
    }

    pub fn apply(&self, p: &Point3<f64>) -> Point3<f64> {
        Point3::from(self.rotation * p.coords + self.translation)
    }
}

/// Total-least-squares plane through `markers` (smallest principal direction
/// of the centered marker matrix). At least 3 non-collinear markers required.
///
/// The normal sign is deterministic: it points toward +y of the input frame
/// (callers with a body cloud re-orient it toward the cloud centroid, see
/// [`Plane::oriented_toward`]).
pub fn fit_plane(markers: &[Point3<f64>]) -> Result<PlaneFit> {
    if markers.len() < 3 {
        return Err(Error::DegenerateGeometry(format!(
            "plane fit needs >= 3 markers, got {}",
            markers.len()
        )));
    }
    let n = markers.len() as f64;
    let centroid: Vector3<f64> = markers.iter().map(|p| p.coords).sum::<Vector3<f64>>() / n;

    let mut cov = Matrix3::zeros();
    for p in markers {
        let d = p.coords - centroid;
        cov += d * d.transpose();
    }
    cov /= n;

    let eig = cov.symmetric_eigen();
    // Ascending order of eigenvalues by index lookup.
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let (lo, mid, hi) = (order[0], order[1], order[2]);

    // Collinear or coincident markers leave no second spread direction.
    let scale = eig.eigenvalues[hi].max(1e-30);
    if eig.eigenvalues[mid] / scale < 1e-12 {
        return Err(Error::DegenerateGeometry(
            "markers are collinear or coincident".into(),
        ));
    }

    let mut normal = eig.eigenvectors.column(lo).into_owned();
    // Deterministic sign: first non-zero of (y, x, z) positive.
    let lead = if normal.y != 0.0 {
        normal.y
    } else if normal.x != 0.0 {
        normal.x
    } else {
        normal.z
    };
    if lead < 0.0 {
        normal = -normal;
    }
    let plane = Plane::from_point_normal(Point3::from(centroid), normal)?;
    let rms = (markers
        .iter()
        .map(|p| plane.signed_distance(p).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(PlaneFit { plane, rms })
}

/// Builds the camera-to-body transform from treadmill calibration markers and
/// a pair of walking-direction markers.
///
/// The y-axis is the treadmill plane normal oriented toward the cloud
/// centroid, the x-axis is the walking-direction vector projected onto the
/// plane, and z completes the right-handed triad. The origin is placed at
/// the cloud centroid.
pub fn build_body_frame(
    treadmill_markers: &[Point3<f64>],
    walk_dir_markers: (Point3<f64>, Point3<f64>),
    cloud: &PointCloud,
) -> Result<BodyFrame> {
    cloud.require_frame(Frame::Camera)?;
    let centroid = cloud.centroid();
    let plane = fit_plane(treadmill_markers)?.plane.oriented_toward(&centroid);

    let y_axis = plane.normal();
    let walk = walk_dir_markers.1 - walk_dir_markers.0;
    let in_plane = walk - walk.dot(&y_axis) * y_axis;
    if in_plane.norm() < 1e-9 * walk.norm().max(1e-9) {
        return Err(Error::DegenerateGeometry(
            "walking direction is parallel to the treadmill normal".into(),
        ));
    }
    let x_axis = in_plane.normalize();
    let z_axis = x_axis.cross(&y_axis);

    // Rows of R are the body axes expressed in camera coordinates, so
    // p_body = R (p_cam - centroid).
    let rotation = Matrix3::from_rows(&[
        x_axis.transpose(),
        y_axis.transpose(),
        z_axis.transpose(),
    ]);
    let translation = -(rotation * centroid.coords);
    BodyFrame::new(rotation, translation)
}

/// Applies a camera-to-body transform to a camera-frame cloud.
pub fn transform(cloud: &PointCloud, frame: &BodyFrame) -> Result<PointCloud> {
    cloud.require_frame(Frame::Camera)?;
    let points = cloud.points.iter().map(|p| frame.apply(p)).collect();
    PointCloud::new(points, Frame::Body)
}

/// Mirrors every point of `cloud` through `mirror`. Involutive.
pub fn reflect(cloud: &PointCloud, mirror: &Plane) -> Result<PointCloud> {
    let points = cloud
        .points
        .iter()
        .map(|p| mirror.reflect_point(p))
        .collect();
    PointCloud::new(points, cloud.frame)
}

/// Combines a directly seen cloud with indirect clouds reflected out of
/// their mirrors. All clouds must share one frame; the output point count is
/// the sum of the inputs.
pub fn merge(direct: &PointCloud, indirect: &[(PointCloud, Plane)]) -> Result<PointCloud> {
    let mut points = direct.points.clone();
    for (cloud, mirror) in indirect {
        if cloud.frame != direct.frame {
            return Err(Error::FrameMismatch {
                expected: direct.frame,
                got: cloud.frame,
            });
        }
        points.extend(cloud.points.iter().map(|p| mirror.reflect_point(p)));
    }
    PointCloud::new(points, direct.frame)
}
