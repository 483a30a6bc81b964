//! Seedable generator of walking-body point-cloud sequences.
//!
//! The body is a coarse kinematic figure: a torso cylinder, a head sphere,
//! two two-segment legs and two two-segment arms, all sampled with fixed
//! per-part point budgets so the two body halves carry equal mass. Limb
//! angles follow sinusoids of the gait cycle; a controllable asymmetry
//! perturbs one leg. Output clouds are in the body frame (y up, x along the
//! walking direction, z left-to-right) with the body built around the
//! origin.
//!
//! Every random stream is derived from the seed and the frame index, so
//! output is a pure function of the configuration and independent of
//! evaluation order.

use std::f64::consts::{PI, TAU};

use nalgebra::{Point3, Vector3};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Frame, PointCloud};
use crate::histogram::Side;

const HIP_HALF_WIDTH: f64 = 0.10;
const SHOULDER_HALF_WIDTH: f64 = 0.18;
const THIGH_RADIUS: f64 = 0.07;
const SHANK_RADIUS: f64 = 0.055;
const UPPER_ARM_RADIUS: f64 = 0.045;
const FOREARM_RADIUS: f64 = 0.04;
const NECK_LENGTH: f64 = 0.04;
/// Forward displacement of the head center. Gives the histogram recentering
/// a crisp azimuthal target, like the slight forward lean of a treadmill
/// walker.
const HEAD_FORWARD: f64 = 0.06;
/// Knee flexion amplitude relative to the leg swing amplitude.
const KNEE_FLEX_RATIO: f64 = 0.35;
/// Elbow flexion amplitude relative to the arm swing amplitude.
const ELBOW_FLEX_RATIO: f64 = 0.30;
/// Phase lag accompanying an amplitude-scale asymmetry, radians per unit
/// magnitude (a weighted limb swings late as well as low).
const AMPLITUDE_SCALE_LAG: f64 = 0.2;

/// Kinematic and sampling parameters of the synthetic walker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaitParams {
    /// Frames per second of the emitted sequence.
    pub fps: f64,
    /// Duration of one gait cycle, seconds.
    pub cycle_period: f64,
    pub leg_amplitude_left: f64,
    pub leg_amplitude_right: f64,
    /// Leg phase offsets, radians. A symmetric gait keeps them pi apart.
    pub leg_phase_left: f64,
    pub leg_phase_right: f64,
    /// Hip-to-ankle length, meters.
    pub leg_length_left: f64,
    pub leg_length_right: f64,
    pub arm_amplitude_left: f64,
    pub arm_amplitude_right: f64,
    /// Arm phase offsets; by default each arm swings opposite its leg.
    pub arm_phase_left: f64,
    pub arm_phase_right: f64,
    /// Shoulder-to-wrist length, meters.
    pub arm_length_left: f64,
    pub arm_length_right: f64,
    /// Hip-to-shoulder height, meters.
    pub torso_height: f64,
    pub torso_radius: f64,
    pub head_radius: f64,
    /// Surface points sampled per frame (>= 100).
    pub points_per_frame: usize,
    /// Standard deviation of per-coordinate Gaussian noise, meters.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for GaitParams {
    fn default() -> Self {
        Self {
            fps: 13.0,
            cycle_period: 1.2,
            leg_amplitude_left: 0.55,
            leg_amplitude_right: 0.55,
            leg_phase_left: 0.0,
            leg_phase_right: PI,
            leg_length_left: 0.90,
            leg_length_right: 0.90,
            arm_amplitude_left: 0.30,
            arm_amplitude_right: 0.30,
            arm_phase_left: PI,
            arm_phase_right: 0.0,
            arm_length_left: 0.58,
            arm_length_right: 0.58,
            torso_height: 0.55,
            torso_radius: 0.16,
            head_radius: 0.11,
            points_per_frame: 2000,
            noise_sigma: 0.005,
            seed: 0,
        }
    }
}

impl GaitParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("fps", self.fps),
            ("cycle_period", self.cycle_period),
            ("leg_length_left", self.leg_length_left),
            ("leg_length_right", self.leg_length_right),
            ("arm_length_left", self.arm_length_left),
            ("arm_length_right", self.arm_length_right),
            ("torso_height", self.torso_height),
            ("torso_radius", self.torso_radius),
            ("head_radius", self.head_radius),
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidConfig(format!("{name} must be > 0, got {v}")));
            }
        }
        let non_negative = [
            ("leg_amplitude_left", self.leg_amplitude_left),
            ("leg_amplitude_right", self.leg_amplitude_right),
            ("arm_amplitude_left", self.arm_amplitude_left),
            ("arm_amplitude_right", self.arm_amplitude_right),
            ("noise_sigma", self.noise_sigma),
        ];
        for (name, v) in non_negative {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be >= 0, got {v}"
                )));
            }
        }
        if self.points_per_frame < 100 {
            return Err(Error::InvalidConfig(format!(
                "points_per_frame must be >= 100, got {}",
                self.points_per_frame
            )));
        }
        Ok(())
    }
}

/// Which perturbation a generated gait carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AsymmetryKind {
    /// No perturbation; magnitude must be 0.
    None,
    /// Adds the magnitude (radians) to one leg's phase.
    PhaseShift,
    /// Scales one leg's swing amplitude down by the magnitude (unitless)
    /// with a small proportional phase lag, like a weighted ankle.
    AmplitudeScale,
    /// Lengthens one leg by the magnitude (meters), like a padded sole.
    LegLengthDelta,
}

/// A single-sided gait perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymmetrySpec {
    pub kind: AsymmetryKind,
    pub side: Side,
    /// Radians, unitless scale or meters depending on the kind; >= 0.
    pub magnitude: f64,
}

impl AsymmetrySpec {
    pub fn none() -> Self {
        Self {
            kind: AsymmetryKind::None,
            side: Side::Left,
            magnitude: 0.0,
        }
    }

    pub fn new(kind: AsymmetryKind, side: Side, magnitude: f64) -> Result<Self> {
        let spec = Self {
            kind,
            side,
            magnitude,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.magnitude.is_finite() || self.magnitude < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "asymmetry magnitude must be >= 0, got {}",
                self.magnitude
            )));
        }
        if self.kind == AsymmetryKind::None && self.magnitude != 0.0 {
            return Err(Error::InvalidConfig(
                "asymmetry kind `none` requires magnitude 0".into(),
            ));
        }
        Ok(())
    }
}

impl Default for AsymmetrySpec {
    fn default() -> Self {
        Self::none()
    }
}

#[derive(Debug, Clone, Copy)]
struct LimbSpec {
    amplitude: f64,
    phase: f64,
    length: f64,
}

fn leg_specs(params: &GaitParams, asym: &AsymmetrySpec) -> (LimbSpec, LimbSpec) {
    let mut left = LimbSpec {
        amplitude: params.leg_amplitude_left,
        phase: params.leg_phase_left,
        length: params.leg_length_left,
    };
    let mut right = LimbSpec {
        amplitude: params.leg_amplitude_right,
        phase: params.leg_phase_right,
        length: params.leg_length_right,
    };
    let target = match asym.side {
        Side::Left => &mut left,
        Side::Right => &mut right,
    };
    match asym.kind {
        AsymmetryKind::None => {}
        AsymmetryKind::PhaseShift => target.phase += asym.magnitude,
        AsymmetryKind::AmplitudeScale => {
            target.amplitude *= (1.0 - asym.magnitude).max(0.0);
            target.phase += AMPLITUDE_SCALE_LAG * asym.magnitude;
        }
        AsymmetryKind::LegLengthDelta => target.length += asym.magnitude,
    }
    (left, right)
}

/// Fixed per-part point budgets; left and right shares are identical so the
/// symmetric baseline carries balanced half-body mass.
#[derive(Debug, Clone, Copy)]
struct Budgets {
    torso: usize,
    head: usize,
    thigh: usize,
    shank: usize,
    upper_arm: usize,
    forearm: usize,
}

fn budgets(points_per_frame: usize) -> Budgets {
    let head = points_per_frame * 10 / 100;
    let thigh = points_per_frame * 9 / 100;
    let shank = points_per_frame * 9 / 100;
    let upper_arm = points_per_frame * 6 / 100;
    let forearm = points_per_frame * 6 / 100;
    let torso = points_per_frame - head - 2 * (thigh + shank + upper_arm + forearm);
    Budgets {
        torso,
        head,
        thigh,
        shank,
        upper_arm,
        forearm,
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Per-frame random stream: mixing the frame index into the seed keeps
/// frames independent of generation order.
fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(frame)))
}

/// Azimuth range a sampled ring may cover.
#[derive(Clone, Copy, PartialEq)]
enum Coverage {
    Full,
    /// Positive-z half only, azimuth in (0, pi].
    HalfPositiveZ,
}

/// Fractional part of the golden ratio, the Kronecker sequence stride.
const GOLDEN_FRAC: f64 = 0.618_033_988_749_894_9;

/// Jittered Kronecker azimuth of sample `i` of `n`. Together with a height
/// axis stratified in index order this gives a low-discrepancy surface
/// sampling: any height-contiguous subset of a part (such as the rows that
/// feed the histogram recentering) keeps balanced azimuths, where plain
/// uniform draws leave sqrt(n) circular noise.
fn kronecker_azimuth(rng: &mut ChaCha8Rng, coverage: Coverage, i: usize, n: usize) -> f64 {
    // Jitter stays within one sequence step, anything wider would wash the
    // low-discrepancy structure back out.
    let u = rng.gen::<f64>() / n as f64;
    let base = (i as f64 * GOLDEN_FRAC).fract();
    match coverage {
        Coverage::Full => (base + u).fract() * TAU,
        Coverage::HalfPositiveZ => (base + u).fract().max(f64::MIN_POSITIVE) * PI,
    }
}

/// Samples `n` points on a cylinder of `radius` around the segment `a -> b`.
/// The segment must lie in the x-y plane (all limbs and the torso do).
fn sample_segment(
    a: Point3<f64>,
    b: Point3<f64>,
    radius: f64,
    n: usize,
    coverage: Coverage,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Point3<f64>>,
) {
    let axis = b - a;
    let inv_len = 1.0 / axis.norm();
    // In-plane normal and the z direction span the cross-section.
    let u = Vector3::new(axis.y * inv_len, -axis.x * inv_len, 0.0);
    let v = Vector3::z();
    for i in 0..n {
        let t = (i as f64 + rng.gen::<f64>()) / n as f64;
        let az = kronecker_azimuth(rng, coverage, i, n);
        out.push(a + t * axis + radius * (az.cos() * u + az.sin() * v));
    }
}

/// Samples `n` points on a sphere surface.
fn sample_sphere(
    center: Point3<f64>,
    radius: f64,
    n: usize,
    coverage: Coverage,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Point3<f64>>,
) {
    for i in 0..n {
        let y = -1.0 + 2.0 * (i as f64 + rng.gen::<f64>()) / n as f64;
        let az = kronecker_azimuth(rng, coverage, i, n);
        let s = (1.0 - y * y).max(0.0).sqrt();
        out.push(center + radius * Vector3::new(s * az.cos(), y, s * az.sin()));
    }
}

/// Hip-to-knee and knee-to-ankle joints for a leg at the given cycle angle.
fn leg_joints(spec: &LimbSpec, cycle_angle: f64, hip: Point3<f64>) -> (Point3<f64>, Point3<f64>) {
    let phase = cycle_angle + spec.phase;
    let thigh_angle = spec.amplitude * phase.sin();
    let knee_flex = KNEE_FLEX_RATIO * spec.amplitude * (1.0 - phase.cos());
    let shank_angle = thigh_angle - knee_flex;
    let half = spec.length * 0.5;
    let knee = hip + half * Vector3::new(thigh_angle.sin(), -thigh_angle.cos(), 0.0);
    let ankle = knee + half * Vector3::new(shank_angle.sin(), -shank_angle.cos(), 0.0);
    (knee, ankle)
}

/// Shoulder-to-elbow and elbow-to-wrist joints; the forearm bends forward.
fn arm_joints(
    spec: &LimbSpec,
    cycle_angle: f64,
    shoulder: Point3<f64>,
) -> (Point3<f64>, Point3<f64>) {
    let phase = cycle_angle + spec.phase;
    let upper_angle = spec.amplitude * phase.sin();
    let elbow_flex = ELBOW_FLEX_RATIO * spec.amplitude * (1.0 - phase.cos());
    let fore_angle = upper_angle + elbow_flex;
    let upper_len = spec.length * 0.52;
    let fore_len = spec.length * 0.48;
    let elbow = shoulder + upper_len * Vector3::new(upper_angle.sin(), -upper_angle.cos(), 0.0);
    let wrist = elbow + fore_len * Vector3::new(fore_angle.sin(), -fore_angle.cos(), 0.0);
    (elbow, wrist)
}

fn head_center(params: &GaitParams) -> Point3<f64> {
    Point3::new(
        HEAD_FORWARD,
        params.torso_height + NECK_LENGTH + params.head_radius,
        0.0,
    )
}

fn apply_noise(points: &mut [Point3<f64>], sigma: f64, rng: &mut ChaCha8Rng) {
    if sigma <= 0.0 {
        return;
    }
    let dist = Normal::new(0.0, sigma).expect("validated sigma");
    for p in points {
        p.x += dist.sample(rng);
        p.y += dist.sample(rng);
        p.z += dist.sample(rng);
    }
}

/// Generates `n_frames` body-frame clouds of the walking figure.
///
/// Fully determined by `params.seed`; the asymmetry perturbs the designated
/// leg and a `magnitude == 0` perturbation reproduces the symmetric gait
/// bit for bit.
pub fn generate(
    params: &GaitParams,
    asym: &AsymmetrySpec,
    n_frames: usize,
) -> Result<Vec<PointCloud>> {
    params.validate()?;
    asym.validate()?;
    if n_frames < 1 {
        return Err(Error::InvalidConfig("n_frames must be >= 1".into()));
    }
    let (left_leg, right_leg) = leg_specs(params, asym);
    let left_arm = LimbSpec {
        amplitude: params.arm_amplitude_left,
        phase: params.arm_phase_left,
        length: params.arm_length_left,
    };
    let right_arm = LimbSpec {
        amplitude: params.arm_amplitude_right,
        phase: params.arm_phase_right,
        length: params.arm_length_right,
    };
    let b = budgets(params.points_per_frame);
    let torso_top = Point3::new(0.0, params.torso_height, 0.0);
    let head = head_center(params);

    (0..n_frames)
        .map(|frame| {
            let mut rng = frame_rng(params.seed, frame as u64);
            let cycle_angle = TAU * (frame as f64 / params.fps) / params.cycle_period;
            let mut pts = Vec::with_capacity(params.points_per_frame);

            sample_segment(
                Point3::origin(),
                torso_top,
                params.torso_radius,
                b.torso,
                Coverage::Full,
                &mut rng,
                &mut pts,
            );
            sample_sphere(head, params.head_radius, b.head, Coverage::Full, &mut rng, &mut pts);

            for (spec, z_side) in [(&left_leg, -HIP_HALF_WIDTH), (&right_leg, HIP_HALF_WIDTH)] {
                let hip = Point3::new(0.0, 0.0, z_side);
                let (knee, ankle) = leg_joints(spec, cycle_angle, hip);
                sample_segment(hip, knee, THIGH_RADIUS, b.thigh, Coverage::Full, &mut rng, &mut pts);
                sample_segment(knee, ankle, SHANK_RADIUS, b.shank, Coverage::Full, &mut rng, &mut pts);
            }
            for (spec, z_side) in [
                (&left_arm, -SHOULDER_HALF_WIDTH),
                (&right_arm, SHOULDER_HALF_WIDTH),
            ] {
                let shoulder = Point3::new(0.0, params.torso_height, z_side);
                let (elbow, wrist) = arm_joints(spec, cycle_angle, shoulder);
                sample_segment(
                    shoulder,
                    elbow,
                    UPPER_ARM_RADIUS,
                    b.upper_arm,
                    Coverage::Full,
                    &mut rng,
                    &mut pts,
                );
                sample_segment(elbow, wrist, FOREARM_RADIUS, b.forearm, Coverage::Full, &mut rng, &mut pts);
            }
            apply_noise(&mut pts, params.noise_sigma, &mut rng);
            PointCloud::new(pts, Frame::Body)
        })
        .collect()
}

fn mirror_z(points: &[Point3<f64>]) -> Vec<Point3<f64>> {
    points.iter().map(|p| Point3::new(p.x, p.y, -p.z)).collect()
}

/// Builds one positive-z half-body frame: half torso, half head and one leg
/// at the given cycle angle. Surface sample parameters are fixed by `rng`
/// draws in a deterministic order.
struct HalfBody {
    static_points: Vec<Point3<f64>>,
    thigh_params: Vec<(f64, f64)>,
    shank_params: Vec<(f64, f64)>,
    leg: LimbSpec,
    hip: Point3<f64>,
}

impl HalfBody {
    fn new(params: &GaitParams) -> Self {
        let b = budgets(params.points_per_frame);
        // One deterministic stream for all surface parameters.
        let mut rng = frame_rng(params.seed, u64::MAX);

        let mut static_points = Vec::new();
        sample_segment(
            Point3::origin(),
            Point3::new(0.0, params.torso_height, 0.0),
            params.torso_radius,
            b.torso / 2,
            Coverage::HalfPositiveZ,
            &mut rng,
            &mut static_points,
        );
        sample_sphere(
            head_center(params),
            params.head_radius,
            b.head / 2,
            Coverage::HalfPositiveZ,
            &mut rng,
            &mut static_points,
        );

        let draw_params = |rng: &mut ChaCha8Rng, n: usize| -> Vec<(f64, f64)> {
            (0..n)
                .map(|i| {
                    (
                        (i as f64 + rng.gen::<f64>()) / n as f64,
                        kronecker_azimuth(rng, Coverage::Full, i, n),
                    )
                })
                .collect()
        };
        let thigh_params = draw_params(&mut rng, b.thigh);
        let shank_params = draw_params(&mut rng, b.shank);

        Self {
            static_points,
            thigh_params,
            shank_params,
            leg: LimbSpec {
                amplitude: params.leg_amplitude_left,
                phase: params.leg_phase_left,
                length: params.leg_length_left,
            },
            hip: Point3::new(0.0, 0.0, HIP_HALF_WIDTH),
        }
    }

    /// Places the fixed surface samples for the pose at `cycle_angle`.
    fn frame_points(&self, cycle_angle: f64) -> Vec<Point3<f64>> {
        let (knee, ankle) = leg_joints(&self.leg, cycle_angle, self.hip);
        let mut pts = self.static_points.clone();
        place_on_segment(self.hip, knee, THIGH_RADIUS, &self.thigh_params, &mut pts);
        place_on_segment(knee, ankle, SHANK_RADIUS, &self.shank_params, &mut pts);
        pts
    }
}

/// Places pre-drawn `(t, azimuth)` surface parameters onto a posed segment.
fn place_on_segment(
    a: Point3<f64>,
    b: Point3<f64>,
    radius: f64,
    surface_params: &[(f64, f64)],
    out: &mut Vec<Point3<f64>>,
) {
    let axis = b - a;
    let inv_len = 1.0 / axis.norm();
    let u = Vector3::new(axis.y * inv_len, -axis.x * inv_len, 0.0);
    let v = Vector3::z();
    for &(t, az) in surface_params {
        out.push(a + t * axis + radius * (az.cos() * u + az.sin() * v));
    }
}

/// Generates a sequence whose z-mirror at frame `t` exactly equals the cloud
/// at frame `t + k`, the ground-truth fixture for the perfect-mirror-zero
/// property.
///
/// One positive-z half-body trajectory (half torso, half head, one swinging
/// leg; arms are omitted since static upper-body mass is what anchors the
/// recentering) is sampled once and the negative-z half is its mirror taken
/// `k` frames ahead. For `k > 0` the trajectory is made periodic with period
/// `2k` frames by index arithmetic, which closes the mirror relation for
/// every frame. `noise_sigma` is applied to the half trajectory before
/// mirroring, so the relation survives noise; 0 is recommended for exact
/// fixtures.
pub fn generate_mirror_pair(
    params: &GaitParams,
    k: usize,
    n_frames: usize,
) -> Result<Vec<PointCloud>> {
    params.validate()?;
    if n_frames < 1 {
        return Err(Error::InvalidConfig("n_frames must be >= 1".into()));
    }
    if k >= n_frames {
        return Err(Error::InvalidDelay {
            delay: k,
            frames: n_frames,
        });
    }
    let half = HalfBody::new(params);

    let assemble = |own: &[Point3<f64>], mirrored: &[Point3<f64>]| -> Result<PointCloud> {
        let mut pts = Vec::with_capacity(own.len() + mirrored.len());
        pts.extend_from_slice(own);
        pts.extend_from_slice(mirrored);
        PointCloud::new(pts, Frame::Body)
    };

    if k == 0 {
        return (0..n_frames)
            .map(|frame| {
                let cycle_angle =
                    TAU * (frame as f64 / params.fps) / params.cycle_period;
                let mut pts = half.frame_points(cycle_angle);
                let mut rng = frame_rng(params.seed, frame as u64);
                apply_noise(&mut pts, params.noise_sigma, &mut rng);
                let mirrored = mirror_z(&pts);
                assemble(&pts, &mirrored)
            })
            .collect();
    }

    // Base half-trajectory over one period of 2k frames, cached so reuse by
    // index keeps the mirror relation bitwise exact.
    let period = 2 * k;
    let mut base: Vec<Vec<Point3<f64>>> = Vec::with_capacity(period);
    let mut base_mirrored: Vec<Vec<Point3<f64>>> = Vec::with_capacity(period);
    for b in 0..period {
        let cycle_angle = TAU * b as f64 / period as f64;
        let mut pts = half.frame_points(cycle_angle);
        let mut rng = frame_rng(params.seed, b as u64);
        apply_noise(&mut pts, params.noise_sigma, &mut rng);
        base_mirrored.push(mirror_z(&pts));
        base.push(pts);
    }

    (0..n_frames)
        .map(|t| assemble(&base[t % period], &base_mirrored[(t + k) % period]))
        .collect()
}
