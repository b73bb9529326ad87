use nalgebra::{Matrix3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::geometry::{orthonormalize, Plane, Pose};
use crate::physics::CollisionShape;

/// Gravity magnitude, m/s².
pub const GRAVITY: f64 = 9.81;
/// Baumgarte positional-correction factor.
const BAUMGARTE: f64 = 0.2;
/// Penetration below this depth is not corrected (m).
const SLOP: f64 = 2e-4;
/// Contacts are generated within this distance of the surface (m).
const CONTACT_MARGIN: f64 = 1e-3;
/// Coulomb friction coefficient for all pairs.
const FRICTION: f64 = 0.5;
/// Linear speed treated as divergence (m/s).
const MAX_SPEED: f64 = 10.0;

/// Fixed-step solver parameters. Defaults: 1/60 s timestep, 10 solver
/// iterations, 4 substeps, 1 kg mass, 60 settle steps.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SimParams {
    pub timestep: f64,
    pub solver_iterations: usize,
    pub substeps: usize,
    pub mass: f64,
    pub settle_steps: usize,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            timestep: 1.0 / 60.0,
            solver_iterations: 10,
            substeps: 4,
            mass: 1.0,
            settle_steps: 60,
        }
    }
}

impl SimParams {
    pub fn validate(&self) {
        assert!(self.timestep > 0.0);
        assert!(self.solver_iterations > 0);
        assert!(self.substeps > 0);
        assert!(self.mass > 0.0);
        assert!(self.settle_steps > 0);
    }
}

/// Simulation environment: supporting plane (gravity is `-normal` scaled by
/// 9.81), fixed bodies that do not move during a settle call, and parameters.
#[derive(Clone)]
pub struct SimEnv {
    pub support: Plane,
    pub fixed_bodies: Vec<(CollisionShape, Pose)>,
    pub params: SimParams,
}

impl SimEnv {
    pub fn plane_only(support: Plane, params: SimParams) -> Self {
        Self {
            support,
            fixed_bodies: Vec::new(),
            params,
        }
    }

    pub fn gravity(&self) -> Vector3<f64> {
        self.support.gravity_direction() * GRAVITY
    }
}

/// Result of a settle call.
#[derive(Debug, Clone, Copy)]
pub struct SettleOutcome {
    pub pose: Pose,
    pub diverged: bool,
    pub steps_run: usize,
}

/// Per-outer-step state reported by [`settle_trace`].
#[derive(Debug, Clone, Copy)]
pub struct SettleStep {
    pub pose: Pose,
    pub kinetic_energy: f64,
    pub potential_energy: f64,
    pub max_penetration: f64,
}

struct Contact {
    point: Vector3<f64>,
    normal: Vector3<f64>,
    depth: f64,
}

struct Body {
    com: Vector3<f64>,
    rotation: Matrix3<f64>,
    linear: Vector3<f64>,
    angular: Vector3<f64>,
    inv_mass: f64,
    inertia_body_inv: Matrix3<f64>,
}

impl Body {
    fn inertia_world_inv(&self) -> Matrix3<f64> {
        self.rotation * self.inertia_body_inv * self.rotation.transpose()
    }

    fn pose(&self, shape: &CollisionShape) -> Pose {
        Pose::new(self.rotation, self.com - self.rotation * shape.com)
    }
}

fn collect_contacts(
    shape: &CollisionShape,
    pose: &Pose,
    env: &SimEnv,
    out: &mut Vec<Contact>,
) {
    out.clear();
    // Free hull vertices against the plane.
    for v in &shape.hull.vertices {
        let w = pose.transform_point(v);
        let s = env.support.signed_distance(&w);
        if s < CONTACT_MARGIN {
            out.push(Contact {
                point: w,
                normal: env.support.normal,
                depth: -s,
            });
        }
    }
    for (fixed_shape, fixed_pose) in &env.fixed_bodies {
        let into_fixed = fixed_pose.inverse();
        // Free hull vertices inside the fixed hull.
        for v in &shape.hull.vertices {
            let w = pose.transform_point(v);
            let q = into_fixed.transform_point(&w);
            let (s, face) = fixed_shape.face_distance(&q);
            if s < CONTACT_MARGIN {
                out.push(Contact {
                    point: w,
                    normal: fixed_pose.transform_vector(&fixed_shape.planes[face].0),
                    depth: -s,
                });
            }
        }
        // Fixed hull vertices inside the free hull.
        let into_free = pose.inverse();
        for v in &fixed_shape.hull.vertices {
            let w = fixed_pose.transform_point(v);
            let q = into_free.transform_point(&w);
            let (s, face) = shape.face_distance(&q);
            if s < CONTACT_MARGIN {
                out.push(Contact {
                    point: w,
                    normal: -pose.transform_vector(&shape.planes[face].0),
                    depth: -s,
                });
            }
        }
    }
}

fn tangent_basis(n: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if n.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let t1 = n.cross(&helper).normalize();
    let t2 = n.cross(&t1);
    (t1, t2)
}

/// Drops/relaxes one free body under gravity against the environment for
/// `settle_steps` fixed timesteps and returns the resulting pose.
///
/// Sequential-impulse contacts with Baumgarte positional correction,
/// restitution 0 and Coulomb friction; the body starts at rest. A body
/// exceeding 10 m/s stops the simulation early and reports divergence.
pub fn settle(env: &SimEnv, shape: &CollisionShape, pose: &Pose) -> SettleOutcome {
    settle_trace(env, shape, pose, None)
}

/// [`settle`] with an optional per-step trace sink.
pub fn settle_trace(
    env: &SimEnv,
    shape: &CollisionShape,
    pose: &Pose,
    mut trace: Option<&mut Vec<SettleStep>>,
) -> SettleOutcome {
    env.params.validate();
    let params = env.params;
    let dt = params.timestep / params.substeps as f64;
    let gravity = env.gravity();
    let inertia_body = shape.unit_inertia * params.mass;
    let mut body = Body {
        com: pose.transform_point(&shape.com),
        rotation: *pose.rotation(),
        linear: Vector3::zeros(),
        angular: Vector3::zeros(),
        inv_mass: 1.0 / params.mass,
        inertia_body_inv: inertia_body
            .try_inverse()
            .expect("inertia tensor is invertible"),
    };

    let mut contacts: Vec<Contact> = Vec::new();
    for step in 0..params.settle_steps {
        for _ in 0..params.substeps {
            body.linear += gravity * dt;
            let current = body.pose(shape);
            collect_contacts(shape, &current, env, &mut contacts);
            solve_contacts(&mut body, &contacts, dt, params.solver_iterations);
            if body.linear.norm() > MAX_SPEED {
                return SettleOutcome {
                    pose: body.pose(shape),
                    diverged: true,
                    steps_run: step,
                };
            }
            body.com += body.linear * dt;
            let angle = body.angular.norm() * dt;
            if angle > 1e-12 {
                let axis = Unit::new_normalize(body.angular);
                let delta = nalgebra::Rotation3::from_axis_angle(&axis, angle);
                body.rotation = delta.matrix() * body.rotation;
            }
            body.rotation = orthonormalize(&body.rotation);
        }
        if let Some(sink) = trace.as_deref_mut() {
            let current = body.pose(shape);
            collect_contacts(shape, &current, env, &mut contacts);
            let max_penetration = contacts
                .iter()
                .map(|c| c.depth)
                .fold(f64::NEG_INFINITY, f64::max)
                .max(0.0);
            let inertia_world = body.rotation * inertia_body * body.rotation.transpose();
            sink.push(SettleStep {
                pose: current,
                kinetic_energy: 0.5 * params.mass * body.linear.norm_squared()
                    + 0.5 * body.angular.dot(&(inertia_world * body.angular)),
                potential_energy: params.mass
                    * GRAVITY
                    * env.support.signed_distance(&body.com),
                max_penetration,
            });
        }
    }
    SettleOutcome {
        pose: body.pose(shape),
        diverged: false,
        steps_run: params.settle_steps,
    }
}

fn solve_contacts(body: &mut Body, contacts: &[Contact], dt: f64, iterations: usize) {
    if contacts.is_empty() {
        return;
    }
    let inv_inertia = body.inertia_world_inv();
    struct Prepared {
        r: Vector3<f64>,
        normal: Vector3<f64>,
        t1: Vector3<f64>,
        t2: Vector3<f64>,
        k_n: f64,
        k_t1: f64,
        k_t2: f64,
        bias: f64,
        impulse_n: f64,
        impulse_t1: f64,
        impulse_t2: f64,
    }
    let effective_mass = |body: &Body, inv_inertia: &Matrix3<f64>, r: &Vector3<f64>, d: &Vector3<f64>| {
        body.inv_mass + (inv_inertia * r.cross(d)).cross(r).dot(d)
    };
    let mut prepared: Vec<Prepared> = contacts
        .iter()
        .map(|c| {
            let r = c.point - body.com;
            let (t1, t2) = tangent_basis(&c.normal);
            Prepared {
                r,
                normal: c.normal,
                t1,
                t2,
                k_n: effective_mass(body, &inv_inertia, &r, &c.normal),
                k_t1: effective_mass(body, &inv_inertia, &r, &t1),
                k_t2: effective_mass(body, &inv_inertia, &r, &t2),
                bias: BAUMGARTE / dt * (c.depth - SLOP).max(0.0),
                impulse_n: 0.0,
                impulse_t1: 0.0,
                impulse_t2: 0.0,
            }
        })
        .collect();

    for _ in 0..iterations {
        for c in prepared.iter_mut() {
            // Normal: zero approach velocity, bias pushes out of penetration.
            let v_rel = body.linear + body.angular.cross(&c.r);
            let vn = v_rel.dot(&c.normal);
            let delta = (c.bias - vn) / c.k_n;
            let updated = (c.impulse_n + delta).max(0.0);
            let applied = updated - c.impulse_n;
            c.impulse_n = updated;
            apply_impulse(body, &inv_inertia, &c.r, &(c.normal * applied));

            // Coulomb friction on both tangents, clamped by the normal load.
            let limit = FRICTION * c.impulse_n;
            let v_rel = body.linear + body.angular.cross(&c.r);
            let vt1 = v_rel.dot(&c.t1);
            let updated = (c.impulse_t1 - vt1 / c.k_t1).clamp(-limit, limit);
            let applied = updated - c.impulse_t1;
            c.impulse_t1 = updated;
            apply_impulse(body, &inv_inertia, &c.r, &(c.t1 * applied));

            let v_rel = body.linear + body.angular.cross(&c.r);
            let vt2 = v_rel.dot(&c.t2);
            let updated = (c.impulse_t2 - vt2 / c.k_t2).clamp(-limit, limit);
            let applied = updated - c.impulse_t2;
            c.impulse_t2 = updated;
            apply_impulse(body, &inv_inertia, &c.r, &(c.t2 * applied));
        }
    }
}

#[inline]
fn apply_impulse(
    body: &mut Body,
    inv_inertia: &Matrix3<f64>,
    r: &Vector3<f64>,
    impulse: &Vector3<f64>,
) {
    body.linear += impulse * body.inv_mass;
    body.angular += inv_inertia * r.cross(impulse);
}

/// Adopts only the orientation of the simulated pose: `[R_sim, t_cur]`.
pub fn rotation_only_update(t_cur: &Pose, t_sim: &Pose) -> Pose {
    t_cur.with_rotation(*t_sim.rotation())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::zoo::box_mesh;
    use crate::physics::make_collision_shape;
    use nalgebra::Unit;

    fn plane_env() -> SimEnv {
        SimEnv::plane_only(Plane::new(Vector3::z(), 0.0), SimParams::default())
    }

    fn cube_shape(s: f64) -> CollisionShape {
        make_collision_shape(&box_mesh(s, s, s)).unwrap()
    }

    #[test]
    fn resting_cube_is_a_fixed_point() {
        let env = plane_env();
        let s = 0.06;
        let shape = cube_shape(s);
        let rest = Pose::from_translation(Vector3::new(0.0, 0.0, s / 2.0));
        let out = settle(&env, &shape, &rest);
        assert!(!out.diverged);
        assert!(rest.translation_distance(&out.pose) < 5e-4, "moved {}", rest.translation_distance(&out.pose));
        assert!(rest.geodesic_angle_deg(&out.pose) < 0.1);
    }

    #[test]
    fn tilted_cube_falls_flat() {
        let env = plane_env();
        let s = 0.06;
        let shape = cube_shape(s);
        let tilted = Pose::from_axis_angle(Vector3::x_axis(), 20.0f64.to_radians())
            .with_translation(Vector3::new(0.0, 0.0, s / 2.0 + 0.005 + s * 0.2));
        let mut trace = Vec::new();
        let out = settle_trace(&env, &shape, &tilted, Some(&mut trace));
        assert!(!out.diverged);
        // Face normal aligned with the plane within 1 degree.
        let up = out.pose.transform_vector(&Vector3::z());
        let tilt = up.dot(&Vector3::z()).clamp(-1.0, 1.0).acos().to_degrees();
        let tilt = tilt.min((180.0 - tilt).abs());
        assert!(tilt < 1.0, "tilt {tilt} deg");
        let last = trace.last().unwrap();
        assert!(last.max_penetration < 1e-3, "penetration {}", last.max_penetration);
    }

    #[test]
    fn stacked_cube_stays_stacked() {
        let s = 0.06;
        let shape = cube_shape(s);
        let base = Pose::from_translation(Vector3::new(0.0, 0.0, s / 2.0));
        let mut env = plane_env();
        env.fixed_bodies.push((cube_shape(s), base));
        let top = Pose::from_translation(Vector3::new(0.0, 0.0, s + s / 2.0));
        let mut trace = Vec::new();
        let out = settle_trace(&env, &shape, &top, Some(&mut trace));
        assert!(!out.diverged);
        assert!(top.translation_distance(&out.pose) < 1e-3);
        assert!(trace.last().unwrap().max_penetration < 1e-3);
    }

    #[test]
    fn energy_is_dissipated() {
        let env = plane_env();
        let shape = cube_shape(0.05);
        let start = Pose::from_axis_angle(Unit::new_normalize(Vector3::new(0.5, 1.0, 0.0)), 0.4)
            .with_translation(Vector3::new(0.0, 0.0, 0.08));
        let mut trace = Vec::new();
        let out = settle_trace(&env, &shape, &start, Some(&mut trace));
        assert!(!out.diverged);
        let mut prev = f64::INFINITY;
        for (i, step) in trace.iter().enumerate() {
            let e = step.kinetic_energy + step.potential_energy;
            if i > 0 {
                assert!(
                    e <= prev * 1.01 + 1e-9,
                    "energy gain at step {i}: {prev} -> {e}"
                );
            }
            prev = e;
        }
        // The drop actually dissipates energy overall.
        let first = trace.first().unwrap();
        let last = trace.last().unwrap();
        assert!(
            last.kinetic_energy + last.potential_energy
                < first.kinetic_energy + first.potential_energy
        );
        assert!(last.kinetic_energy < 1e-6);
    }

    #[test]
    fn trajectories_are_bit_deterministic() {
        let env = plane_env();
        let shape = cube_shape(0.05);
        let start = Pose::from_axis_angle(Vector3::y_axis(), 0.3)
            .with_translation(Vector3::new(0.01, -0.02, 0.07));
        let mut trace_a = Vec::new();
        let mut trace_b = Vec::new();
        let a = settle_trace(&env, &shape, &start, Some(&mut trace_a));
        let b = settle_trace(&env, &shape, &start, Some(&mut trace_b));
        assert_eq!(a.pose.rotation(), b.pose.rotation());
        assert_eq!(a.pose.translation(), b.pose.translation());
        for (x, y) in trace_a.iter().zip(&trace_b) {
            assert_eq!(x.pose.translation(), y.pose.translation());
        }
    }

    #[test]
    fn rest_pose_is_frame_invariant() {
        let params = SimParams::default();
        let shape = cube_shape(0.05);
        let start = Pose::from_axis_angle(Vector3::x_axis(), 0.25)
            .with_translation(Vector3::new(0.0, 0.0, 0.06));
        let env_a = SimEnv::plane_only(Plane::new(Vector3::z(), 0.0), params);
        let out_a = settle(&env_a, &shape, &start);

        let motion = Pose::from_axis_angle(Unit::new_normalize(Vector3::new(0.2, 0.5, 1.0)), 0.9)
            .with_translation(Vector3::new(0.3, -0.2, 0.4));
        let rotated_normal = motion.transform_vector(&Vector3::z());
        let point_on = motion.transform_point(&Vector3::zeros());
        let env_b = SimEnv::plane_only(
            Plane::new(rotated_normal, rotated_normal.dot(&point_on)),
            params,
        );
        let out_b = settle(&env_b, &shape, &motion.compose(&start));
        let expected = motion.compose(&out_a.pose);
        assert!(expected.translation_distance(&out_b.pose) < 1e-3);
        assert!(expected.geodesic_angle_deg(&out_b.pose) < 1.0);
    }

    #[test]
    fn rotation_only_update_discards_translation() {
        let cur = Pose::from_translation(Vector3::new(0.1, 0.2, 0.3));
        let sim = Pose::from_axis_angle(Vector3::z_axis(), 10.0f64.to_radians())
            .with_translation(Vector3::new(1.0, 2.0, 3.0));
        let out = rotation_only_update(&cur, &sim);
        assert_eq!(out.rotation(), sim.rotation());
        assert_eq!(out.translation(), cur.translation());
        let same = rotation_only_update(&cur, &cur);
        assert_eq!(same, cur);
    }
}
