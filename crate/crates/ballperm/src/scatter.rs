//! Scattering geometry compiled to rapidity circuits, Yang-Baxter checks,
//! and the postselected gadget compiler.
//!
//! Particles ride straight lines `x_i(t) = x_i + v_i t`; each pairwise
//! crossing is a collision of the two spatially adjacent particles and
//! becomes one `R(z, k)` gate with `z` the left-minus-right velocity
//! difference at that moment. The compiled unitary depends only on the final
//! left-to-right order of the lines (the permutation signature), which is the
//! content of the parameter-dependent Yang-Baxter equation
//! `R(x,1)R(x+y,2)R(y,1) = R(y,2)R(x+y,1)R(x,2)`.
//!
//! Two particles cross at most once, so a single collision angle is capped at
//! `tan⁻¹ z`. Demolition measurements with postselection lift the cap: a
//! reflected ancilla lets the same pair of balls interact again, and the
//! gadgets here chain that trick into arbitrary adjacent partial-swap
//! circuits, at the price of a success probability that shrinks with every
//! postselected detection.

use serde::{Deserialize, Serialize};

use crate::mat::CMat;
use crate::perm::Permutation;
use crate::state::{
    apply_unitary_gate, circuit_unitary, distribution_with_success, BallState, Circuit, Gate,
    Side, C64,
};
use crate::{par, Error, Result};

/// Collision-time tolerance: events closer than this are rejected as ties
/// rather than silently perturbed.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Initial data for a scattering experiment: strictly increasing positions,
/// one velocity per line, interaction strength `c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterConfig {
    pub positions: Vec<f64>,
    pub velocities: Vec<f64>,
    #[serde(default = "default_c")]
    pub c: f64,
}

fn default_c() -> f64 {
    1.0
}

impl ScatterConfig {
    pub fn new(positions: Vec<f64>, velocities: Vec<f64>) -> Self {
        ScatterConfig {
            positions,
            velocities,
            c: 1.0,
        }
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.positions.len() != self.velocities.len() {
            return Err(Error::SizeMismatch {
                left: self.positions.len(),
                right: self.velocities.len(),
            });
        }
        if self.positions.is_empty() {
            return Err(Error::BadScatterConfig("no particles"));
        }
        if self.positions.len() > crate::perm::MAX_N {
            return Err(Error::SizeBound {
                what: "scattering n",
                n: self.positions.len(),
                max: crate::perm::MAX_N,
            });
        }
        if self.positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadScatterConfig(
                "positions must be strictly increasing",
            ));
        }
        if self.c.is_nan() || self.c <= 0.0 {
            return Err(Error::BadScatterConfig("interaction strength must be > 0"));
        }
        Ok(())
    }
}

/// One pairwise crossing, in time order.
#[derive(Clone, Debug, PartialEq)]
pub struct CollisionEvent {
    pub time: f64,
    /// Spatial adjacency index (1-based) of the colliding pair at this time.
    pub k: usize,
    /// 1-based identities of the left and right lines just before crossing.
    pub left_line: usize,
    pub right_line: usize,
    /// Velocity difference left minus right; positive for a real crossing.
    pub rapidity: f64,
}

/// All collisions in time order, with adjacency indices tracked through the
/// evolving spatial order. Ties within [`TIE_TOLERANCE`] are an error.
pub fn collisions(cfg: &ScatterConfig) -> Result<Vec<CollisionEvent>> {
    cfg.validate()?;
    let n = cfg.n();
    let mut raw: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let dv = cfg.velocities[i] - cfg.velocities[j];
            if dv > 0.0 {
                raw.push(((cfg.positions[j] - cfg.positions[i]) / dv, i, j));
            }
        }
    }
    raw.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for w in raw.windows(2) {
        if (w[1].0 - w[0].0).abs() < TIE_TOLERANCE {
            return Err(Error::SimultaneousCollisions { t: w[0].0 });
        }
    }
    // Replay in time order, tracking the left-to-right order of lines.
    let mut order: Vec<usize> = (0..n).collect();
    let mut events = Vec::with_capacity(raw.len());
    for (t, i, j) in raw {
        let pi = order.iter().position(|&l| l == i).unwrap();
        let pj = order.iter().position(|&l| l == j).unwrap();
        let (k, left, right) = if pi + 1 == pj {
            (pi, i, j)
        } else if pj + 1 == pi {
            (pj, j, i)
        } else {
            return Err(Error::SimultaneousCollisions { t });
        };
        events.push(CollisionEvent {
            time: t,
            k: k + 1,
            left_line: left + 1,
            right_line: right + 1,
            rapidity: cfg.velocities[left] - cfg.velocities[right],
        });
        order.swap(k, k + 1);
    }
    Ok(events)
}

/// Compiles a configuration into its rapidity circuit and permutation
/// signature (the final left-to-right order of the line identities).
pub fn compile_trajectories(cfg: &ScatterConfig) -> Result<(Circuit, Permutation)> {
    let events = collisions(cfg)?;
    let n = cfg.n();
    let mut order: Vec<usize> = (0..n).collect();
    let mut gates = Vec::with_capacity(events.len());
    for e in &events {
        gates.push(Gate::r(e.rapidity, e.k));
        order.swap(e.k - 1, e.k);
    }
    let signature =
        Permutation::from_word(order.iter().map(|&l| l as u8 + 1).collect()).unwrap();
    Ok((Circuit { n, gates }, signature))
}

fn r_matrix(z: f64, k: usize) -> CMat {
    let c = Circuit {
        n: 3,
        gates: vec![Gate::r(z, k)],
    };
    circuit_unitary(&c).unwrap()
}

/// Operator-norm residual of `R(x,1)R(x+y,2)R(y,1) − R(y,2)R(x+y,1)R(x,2)`
/// on ℂS_3.
pub fn ybe_residual(x: f64, y: f64) -> f64 {
    let lhs = r_matrix(x, 1).mul(&r_matrix(x + y, 2)).mul(&r_matrix(y, 1));
    let rhs = r_matrix(y, 2).mul(&r_matrix(x + y, 1)).mul(&r_matrix(x, 2));
    lhs.sub(&rhs).spectral_norm()
}

/// Residual of the same product shape with all three rapidities forced to the
/// given value; confirms that mismatched parameters break the identity.
pub fn ybe_residual_mismatched(z: f64) -> f64 {
    let lhs = r_matrix(z, 1).mul(&r_matrix(z, 2)).mul(&r_matrix(z, 1));
    let rhs = r_matrix(z, 2).mul(&r_matrix(z, 1)).mul(&r_matrix(z, 2));
    lhs.sub(&rhs).spectral_norm()
}

/// Worst residual over a `steps × steps` grid of `(x, y)` in `[lo, hi]²`.
pub fn ybe_grid_max_residual(lo: f64, hi: f64, steps: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (0..steps)
        .flat_map(|i| {
            (0..steps).map(move |j| {
                let x = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
                let y = lo + (hi - lo) * j as f64 / (steps - 1) as f64;
                (x, y)
            })
        })
        .collect();
    par::map_collect(&pts, |&(x, y)| ybe_residual(x, y))
        .into_iter()
        .fold(0.0, f64::max)
}

/// Sequential variant of [`ybe_grid_max_residual`] for benchmarking.
pub fn ybe_grid_max_residual_seq(lo: f64, hi: f64, steps: usize) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..steps {
        for j in 0..steps {
            let x = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
            let y = lo + (hi - lo) * j as f64 / (steps - 1) as f64;
            worst = worst.max(ybe_residual(x, y));
        }
    }
    worst
}

/// Relates the scattering amplitudes `−ic/(ic+V)` (reflection) and
/// `V/(ic+V)` (transmission) to the gate form `cos θ·I + i sin θ·L` with
/// `θ = tan⁻¹(V/c)`: both are reproduced after multiplying by a unit phase.
#[derive(Clone, Debug)]
pub struct AmplitudeForm {
    pub theta: f64,
    pub gamma: C64,
    pub reflection: C64,
    pub transmission: C64,
    /// Worst deviation among `|γ|−1` and the two coefficient identities.
    pub max_deviation: f64,
}

pub fn amplitude_form_check(v: f64, c: f64) -> Result<AmplitudeForm> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::BadScatterConfig("interaction strength must be > 0"));
    }
    let denom = C64::new(v, c); // ic + V
    let reflection = C64::new(0.0, -c) / denom;
    let transmission = C64::new(v, 0.0) / denom;
    let theta = (v / c).atan();
    // cos θ = c/√(c²+V²), sin θ = V/√(c²+V²); the algebraic forms avoid the
    // cancellation cos(atan(V/c)) suffers at large V/c.
    let hyp = v.hypot(c);
    let (cos_t, sin_t) = (c / hyp, v / hyp);
    let gamma = reflection / cos_t;
    let dev_unit = (gamma.norm() - 1.0).abs();
    let dev_refl = (reflection - gamma * cos_t).norm();
    let dev_trans = (transmission - gamma * C64::new(0.0, sin_t)).norm();
    Ok(AmplitudeForm {
        theta,
        gamma,
        reflection,
        transmission,
        max_deviation: dev_unit.max(dev_refl).max(dev_trans),
    })
}

/// True when two configurations with identical velocity assignments and equal
/// compiled signatures produce the same unitary within `tol` (entrywise).
/// Velocity or signature mismatches are precondition failures.
pub fn signature_invariance_check(
    cfg1: &ScatterConfig,
    cfg2: &ScatterConfig,
    tol: f64,
) -> Result<bool> {
    if cfg1.velocities.len() != cfg2.velocities.len()
        || cfg1
            .velocities
            .iter()
            .zip(&cfg2.velocities)
            .any(|(a, b)| a != b)
    {
        return Err(Error::UnequalVelocities);
    }
    let (c1, s1) = compile_trajectories(cfg1)?;
    let (c2, s2) = compile_trajectories(cfg2)?;
    if s1 != s2 {
        return Err(Error::SignatureMismatch);
    }
    if c1.n > 5 {
        return Err(Error::SizeBound {
            what: "matrix compare n",
            n: c1.n,
            max: 5,
        });
    }
    let u1 = circuit_unitary(&c1)?;
    let u2 = circuit_unitary(&c2)?;
    Ok(u1.sub(&u2).max_abs() <= tol)
}

/// A four-particle postselected gadget realizing one effective partial swap.
///
/// Register layout `[a, x, y, b]`: ancilla `a` (label 1), two data balls
/// (labels 2, 3), ancilla `b` (label 4). The data balls collide once
/// (`R(z1)`), ancilla `a` collides with the left data ball and is detected
/// bounced (postselected demolition), the same on the right with `b`, and the
/// data pair — now riding the ancilla lines — collides once more (`R(z2)`).
/// Conditioned on both detections the data pair experiences
/// `X(tan⁻¹ z1 + tan⁻¹ z2)` exactly; each bounce contributes a factor
/// `cos tan⁻¹ α` to the success amplitude.
#[derive(Clone, Debug)]
pub struct XGadget {
    pub circuit: Circuit,
    pub effective_theta: f64,
    pub success_probability: f64,
}

/// Bounce rapidity of the ancilla-data collisions inside gadgets.
const GADGET_BOUNCE_RAPIDITY: f64 = 1.0;
/// Transit rapidity used when an ancilla must pass through spectator data.
const GADGET_TRANSIT_RAPIDITY: f64 = 1.0;

pub fn compile_x_gadget(z1: f64, z2: f64) -> Result<XGadget> {
    if !z1.is_finite() || !z2.is_finite() {
        return Err(Error::BadScatterConfig("rapidities must be finite"));
    }
    let alpha = GADGET_BOUNCE_RAPIDITY;
    let beta = GADGET_BOUNCE_RAPIDITY;
    let gates = vec![
        Gate::r(z1, 2),
        Gate::r(alpha, 1),
        Gate::demolition_postselect(1, 1),
        // After the demolition the register is [x, y, b] with b relabeled 3.
        Gate::r(beta, 2),
        Gate::demolition_postselect(3, 3),
        Gate::r(z2, 1),
    ];
    let circuit = Circuit::new(4, gates)?;
    let ca2 = 1.0 / (1.0 + alpha * alpha);
    let cb2 = 1.0 / (1.0 + beta * beta);
    Ok(XGadget {
        circuit,
        effective_theta: z1.atan() + z2.atan(),
        success_probability: ca2 * cb2,
    })
}

/// Measures the effective map of a gadget on its two data balls: returns
/// `(realized angle, fidelity, success probability)` where `fidelity` is the
/// overlap of the conditioned map with `X(effective_theta)` up to global
/// phase.
pub fn gadget_effective_angle(g: &XGadget) -> Result<(f64, f64, f64)> {
    let in0 = BallState::basis(Permutation::from_word(vec![1, 2, 3, 4]).unwrap());
    let in1 = BallState::basis(Permutation::from_word(vec![1, 3, 2, 4]).unwrap());
    let (out0, success) = conditioned_output(&g.circuit, &in0)?;
    let (out1, _) = conditioned_output(&g.circuit, &in1)?;
    let k0 = Permutation::from_word(vec![1, 2]).unwrap();
    let k1 = Permutation::from_word(vec![2, 1]).unwrap();
    // Conditioned 2x2 map in the data basis {|xy⟩, |yx⟩}.
    let m = [
        [out0.amp(&k0), out1.amp(&k0)],
        [out0.amp(&k1), out1.amp(&k1)],
    ];
    let theta = g.effective_theta;
    let x = [
        [C64::new(theta.cos(), 0.0), C64::new(0.0, theta.sin())],
        [C64::new(0.0, theta.sin()), C64::new(theta.cos(), 0.0)],
    ];
    let mut inner = C64::new(0.0, 0.0);
    let mut nm = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            inner += x[r][c].conj() * m[r][c];
            nm += m[r][c].norm_sqr();
        }
    }
    let fidelity = inner.norm() / (nm.sqrt() * 2.0_f64.sqrt());
    // Realized angle read off the conditioned map itself.
    let realized = if m[0][0].norm() > 1e-300 {
        (m[1][0] / C64::new(0.0, 1.0) / m[0][0]).re.atan()
    } else {
        std::f64::consts::FRAC_PI_2
    };
    Ok((realized, fidelity, success))
}

/// Evolves a circuit whose demolitions are all postselected, keeping
/// unnormalized amplitudes; returns the conditioned state and the success
/// probability.
fn conditioned_output(circuit: &Circuit, s0: &BallState) -> Result<(BallState, f64)> {
    let mut s = s0.clone();
    for g in &circuit.gates {
        match g {
            Gate::Demolition { pos, postselect } => {
                let l = postselect.ok_or(Error::UnsupportedGate(
                    "gadget circuits must postselect every demolition",
                ))?;
                s = s.project_remove(*pos, l).0;
            }
            _ => s = apply_unitary_gate(&s, g)?,
        }
    }
    let success = s.norm().powi(2);
    Ok((s, success))
}

/// A partial-swap circuit compiled into the scattering model: rapidity gates
/// plus postselected demolitions over `data_n + 2·(gadget count)` balls.
#[derive(Clone, Debug)]
pub struct ScatterProgram {
    pub circuit: Circuit,
    pub data_n: usize,
    pub gadget_count: usize,
    pub success_probability: f64,
}

/// Compiles a circuit of adjacent positional partial swaps into rapidity
/// gates with postselected demolitions (one four-ball gadget per gate, with
/// postselected pass-throughs ferrying ancillas over spectator data).
///
/// Gates with angle exactly 0 (mod 2π) are dropped; an angle of exactly π
/// sits on the gadget boundary (it would need an infinite rapidity) and is
/// rejected. Angles in `(-π, 0)` compile to `θ + π`, which equals the target
/// up to a global phase and leaves every output distribution unchanged.
pub fn compile_x_circuit_to_scattering(data: &Circuit) -> Result<ScatterProgram> {
    data.validate()?;
    let n = data.n;
    let mut targets: Vec<(usize, f64)> = Vec::new();
    for g in &data.gates {
        match *g {
            Gate::X {
                theta,
                i,
                j,
                side: Side::Right,
            } if j == i + 1 => {
                let mut t = theta.rem_euclid(std::f64::consts::TAU);
                if t > std::f64::consts::PI {
                    t -= std::f64::consts::TAU;
                }
                if (t.abs() - std::f64::consts::PI).abs() < 1e-15 {
                    return Err(Error::ThetaPiBoundary);
                }
                if t != 0.0 {
                    targets.push((i, t));
                }
            }
            Gate::X { .. } => {
                return Err(Error::UnsupportedGate(
                    "scattering compilation requires adjacent positional partial swaps",
                ))
            }
            _ => {
                return Err(Error::UnsupportedGate(
                    "scattering compilation accepts partial-swap gates only",
                ))
            }
        }
    }
    let m = targets.len();
    if m == 0 {
        return Ok(ScatterProgram {
            circuit: Circuit::empty(n),
            data_n: n,
            gadget_count: 0,
            success_probability: 1.0,
        });
    }
    // Initial register: [a_m .. a_1, d_1 .. d_n, b_1 .. b_m].
    let total = n + 2 * m;
    let mut gates: Vec<Gate> = Vec::new();
    let mut success = 1.0_f64;
    let st2 = GADGET_TRANSIT_RAPIDITY * GADGET_TRANSIT_RAPIDITY
        / (1.0 + GADGET_TRANSIT_RAPIDITY * GADGET_TRANSIT_RAPIDITY);
    let ca2 = 1.0 / (1.0 + GADGET_BOUNCE_RAPIDITY * GADGET_BOUNCE_RAPIDITY);
    for (g_idx, &(k, theta)) in targets.iter().enumerate() {
        // Alive registers: left ancillas a_g..a_m (a_g innermost), data,
        // right ancillas b_g..b_m (b_g innermost).
        let left_alive = m - g_idx;
        let phi = if theta > 0.0 {
            theta
        } else {
            theta + std::f64::consts::PI
        };
        let z = (phi / 2.0).tan();
        // Ferry a_g rightward past d_1 .. d_{k-1}.
        let a_start = left_alive;
        for step in 0..k - 1 {
            gates.push(Gate::r(GADGET_TRANSIT_RAPIDITY, a_start + step));
            success *= st2;
        }
        let a_pos = a_start + (k - 1);
        // Ferry b_g leftward past d_n .. d_{k+2}.
        let b_start = left_alive + n + 1;
        for step in 0..n - k - 1 {
            gates.push(Gate::r(GADGET_TRANSIT_RAPIDITY, b_start - 1 - step));
            success *= st2;
        }
        // Core gadget on [a_g, d_k, d_{k+1}, b_g] at a_pos .. a_pos+3. The
        // ancillas' current labels equal their home positions: a_g carries
        // label `a_start`; b_g carries `b_start`, shifted down by one once
        // a_g is gone.
        gates.push(Gate::r(z, a_pos + 1));
        gates.push(Gate::r(GADGET_BOUNCE_RAPIDITY, a_pos));
        gates.push(Gate::demolition_postselect(a_pos, a_start as u8));
        success *= ca2;
        gates.push(Gate::r(GADGET_BOUNCE_RAPIDITY, a_pos + 1));
        gates.push(Gate::demolition_postselect(a_pos + 2, (b_start - 1) as u8));
        success *= ca2;
        gates.push(Gate::r(z, a_pos));
    }
    let circuit = Circuit::new(total, gates)?;
    Ok(ScatterProgram {
        circuit,
        data_n: n,
        gadget_count: m,
        success_probability: success,
    })
}

/// Runs a compiled program on `|12…n_total⟩` and returns the conditional
/// output distribution over the data register together with the realized
/// success probability.
pub fn scatter_program_distribution(
    prog: &ScatterProgram,
) -> Result<(std::collections::BTreeMap<Permutation, f64>, f64)> {
    let init = BallState::basis(Permutation::identity(prog.circuit.n));
    distribution_with_success(&prog.circuit, &init)
}
