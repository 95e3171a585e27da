//! Numerical verification of the constructed solutions.
//!
//! Everything here is an *independent* check: residuals of the PDE and of
//! the boundary condition by finite differences, an alternative evaluation
//! of the dressed field through determinant quotients, asymptotic limits of
//! the dressing matrix, and the structure of the dressed boundary matrix.
//! [`full_report`] bundles the checks for a boundary chain into a single
//! pass/fail report that serialises to flat JSON.
//!
//! All randomised sample points are drawn from a counter-based generator
//! seeded explicitly, so every report is reproducible byte for byte.

use crate::boundary::{
    boundary_matrix, boundary_pairs, boundary_residual, build_boundary_chain_detuned,
    defect_factorization_check, dressed_boundary_matrix_check, BoundaryCondition,
};
use crate::complex2::{c64, C2Matrix, C64, I, ZERO};
use crate::darboux::{
    dressed_u, dressed_u_t_with_step, dressed_u_xx_with_step, dressing_matrix, evaluate_chain,
    expected_determinant, kernel_pairs, DressingChain, SpectralDatum,
};
use crate::error::{Error, Result};
use crate::grid::{map_points, Grid};
use crate::lax::{SolitonParameters, SpacetimePoint};
use crate::scattering::{
    extracted_mirror_relations, mirror_relations, pure_soliton_data, wrap_angle,
};
use crate::tol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Spatial/temporal extent inside which chain evaluation is guarded against
/// exponent overflow.
pub const EVALUATION_EXTENT: f64 = 50.0;

/// Times at which boundary decay is sampled.
pub const DECAY_TIMES: [f64; 3] = [20.0, 40.0, 80.0];

/// Pointwise residual |i u_t + u_xx + 2 |u|^2 u| of the dressed field,
/// derivatives by 4th-order central stencils of step `h`.
pub fn nls_residual_at(chain: &DressingChain, p: SpacetimePoint, h: f64) -> Result<f64> {
    if p.t.abs() > EVALUATION_EXTENT || p.x.abs() > EVALUATION_EXTENT {
        return Err(Error::EvaluationGuard(format!(
            "residual point ({}, {}) outside |t|, |x| <= {}",
            p.t, p.x, EVALUATION_EXTENT
        )));
    }
    let u = dressed_u(chain, p)?;
    let ut = dressed_u_t_with_step(chain, p, h)?;
    let uxx = dressed_u_xx_with_step(chain, p, h)?;
    Ok((I * ut + uxx + 2.0 * c64(u.norm_sqr(), 0.0) * u).norm())
}

/// Maximum NLS residual over a grid.
pub fn pde_residual_sweep(chain: &DressingChain, grid: &Grid, h: f64) -> Result<f64> {
    for bound in [grid.t_min, grid.t_max, grid.x_min, grid.x_max] {
        if bound.abs() > EVALUATION_EXTENT {
            return Err(Error::EvaluationGuard(format!(
                "grid bound {bound} outside |t|, |x| <= {EVALUATION_EXTENT}"
            )));
        }
    }
    let residuals = map_points(&grid.points(), |p| nls_residual_at(chain, p, h))?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

/// Maximum boundary residual over the given times.
pub fn boundary_residual_sweep(
    bc: &BoundaryCondition,
    chain: &DressingChain,
    times: &[f64],
) -> Result<f64> {
    let pts: Vec<SpacetimePoint> = times.iter().map(|&t| SpacetimePoint::new(t, 0.0)).collect();
    let residuals = map_points(&pts, |p| boundary_residual(bc, chain, p.t))?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

/// Uniformly spaced times in [lo, hi].
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64)
        .collect()
}

/// Random spectral samples from the annulus 0.5 <= |lambda| <= 3, at least
/// 0.05 from both axes and 0.1 from every point of `avoid`.
pub fn annulus_lambda_samples(rng: &mut ChaCha8Rng, count: usize, avoid: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let r = rng.gen_range(0.5..3.0);
        let th = rng.gen_range(0.0..std::f64::consts::TAU);
        let lambda = c64(r * th.cos(), r * th.sin());
        if lambda.re.abs() < 0.05 || lambda.im.abs() < 0.05 {
            continue;
        }
        if avoid.iter().any(|&a| (lambda - a).norm() < 0.1) {
            continue;
        }
        out.push(lambda);
    }
    out
}

/// Deterministic samples on a circle of the given radius; the radius is
/// nudged outward if any avoided point comes within 0.15 of the circle.
pub fn circle_lambda_samples(count: usize, radius: f64, avoid: &[C64]) -> Vec<C64> {
    let mut r = radius;
    while avoid.iter().any(|a| (a.norm() - r).abs() < 0.15) {
        r += 0.25;
    }
    (0..count)
        .map(|k| {
            let th = 0.37 + std::f64::consts::TAU * k as f64 / count as f64;
            c64(r * th.cos(), r * th.sin())
        })
        .collect()
}

/// Everything D(lambda) must avoid: chain poles and their conjugates, plus
/// their negatives (the dressed boundary matrix also evaluates at -lambda).
pub fn chain_avoid_set(chain: &DressingChain) -> Vec<C64> {
    let mut avoid = Vec::with_capacity(4 * chain.len());
    for l in chain.lambdas() {
        avoid.push(l);
        avoid.push(l.conj());
        avoid.push(-l);
        avoid.push(-l.conj());
    }
    avoid
}

/// Asymptotic-limit check for a one-fold chain: at x = -40 the dressing
/// matrix must equal diag(lambda - conj(l1), lambda - l1), at x = +40 the
/// transposed-diagonal form, for 5 random lambda.  Returns the largest
/// max-norm deviation.
pub fn dressing_limits_check(datum: &SpectralDatum, seed: u64) -> Result<f64> {
    let l1 = datum.lambda();
    if l1.im <= 0.0 {
        return Err(Error::PoleNotUpperHalfPlane(l1));
    }
    let (u0, v0) = datum.constants();
    if u0.norm_sqr() == 0.0 || v0.norm_sqr() == 0.0 {
        return Err(Error::InvalidParameter(
            "asymptotic limits require both vacuum coefficients nonzero".into(),
        ));
    }
    let chain = DressingChain::single(*datum);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = annulus_lambda_samples(&mut rng, 5, &[l1, l1.conj()]);
    let mut worst = 0.0_f64;
    for lambda in samples {
        let d_minus = dressing_matrix(&chain, SpacetimePoint::new(0.0, -40.0), lambda)?;
        let want_minus = C2Matrix::diag(lambda - l1.conj(), lambda - l1);
        worst = worst.max((d_minus - want_minus).max_norm());
        let d_plus = dressing_matrix(&chain, SpacetimePoint::new(0.0, 40.0), lambda)?;
        let want_plus = C2Matrix::diag(lambda - l1, lambda - l1.conj());
        worst = worst.max((d_plus - want_plus).max_norm());
    }
    Ok(worst)
}

/// Evaluate the dressed field through the first-row linear system of the
/// dressing matrix: the 2M kernel conditions determine the first-row
/// polynomial coefficients, and u = 2i times the top coefficient of the
/// (1,2) entry, computed as a quotient of two 2M x 2M determinants.
///
/// This shares no code path with the projector recursion, which makes it an
/// independent oracle for [`dressed_u`](crate::darboux::dressed_u).
pub fn determinant_quotient_oracle(chain: &DressingChain, p: SpacetimePoint) -> Result<C64> {
    let m = chain.len();
    let n = 2 * m;
    let pairs = kernel_pairs(chain, p);
    debug_assert_eq!(pairs.len(), n);

    // augmented rows [A | rhs], scaled per row
    let mut rows: Vec<Vec<C64>> = Vec::with_capacity(n);
    for (lambda, v) in pairs {
        let mut row = Vec::with_capacity(n + 1);
        let mut pw = c64(1.0, 0.0);
        let mut powers = Vec::with_capacity(m + 1);
        for _ in 0..=m {
            powers.push(pw);
            pw *= lambda;
        }
        for pw in &powers[..m] {
            row.push(pw * v.first);
        }
        for pw in &powers[..m] {
            row.push(pw * v.second);
        }
        row.push(-powers[m] * v.first);
        let scale = row.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale < 1e-280 {
            return Err(Error::SingularDeterminant);
        }
        for z in &mut row {
            *z /= scale;
        }
        rows.push(row);
    }

    let det_a = complex_det(rows.iter().map(|r| r[..n].to_vec()).collect());
    if det_a.norm() < 1e-250 {
        return Err(Error::SingularDeterminant);
    }
    // replace the last column (coefficient of lambda^{M-1} in the (1,2)
    // entry) with the right-hand side
    let det_b = complex_det(
        rows.iter()
            .map(|r| {
                let mut c = r[..n].to_vec();
                c[n - 1] = r[n];
                c
            })
            .collect(),
    );
    Ok(2.0 * I * det_b / det_a)
}

/// LU determinant with partial pivoting.
// Index loop: the elimination updates row `row` from row `col` of the same
// matrix, which iterator forms cannot borrow simultaneously.
#[allow(clippy::needless_range_loop)]
fn complex_det(mut m: Vec<Vec<C64>>) -> C64 {
    let n = m.len();
    let mut det = c64(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m[i][col]
                    .norm_sqr()
                    .partial_cmp(&m[j][col].norm_sqr())
                    .unwrap()
            })
            .unwrap();
        if m[pivot][col].norm_sqr() == 0.0 {
            return ZERO;
        }
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..n {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
        }
    }
    det
}

/// Locate the highest crest of |u(t, .)| in [x_lo, x_hi]: coarse scan over
/// `n_coarse` points, then ternary refinement.  Returns (x_peak, |u|_peak).
pub fn peak_track(
    chain: &DressingChain,
    t: f64,
    x_lo: f64,
    x_hi: f64,
    n_coarse: usize,
) -> Result<(f64, f64)> {
    if x_hi.is_nan() || x_lo.is_nan() || x_hi <= x_lo || n_coarse < 8 {
        return Err(Error::InvalidParameter(
            "peak tracking needs x_hi > x_lo and at least 8 scan points".into(),
        ));
    }
    let envelope = |x: f64| -> Result<f64> {
        Ok(dressed_u(chain, SpacetimePoint::new(t, x))?.norm())
    };
    let mut best = (0usize, f64::MIN);
    for i in 0..n_coarse {
        let x = x_lo + (x_hi - x_lo) * i as f64 / (n_coarse - 1) as f64;
        let v = envelope(x)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    let step = (x_hi - x_lo) / (n_coarse - 1) as f64;
    let mut lo = x_lo + step * best.0.saturating_sub(1) as f64;
    let mut hi = (x_lo + step * (best.0 + 1) as f64).min(x_hi);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if envelope(m1)? < envelope(m2)? {
            lo = m1;
        } else {
            hi = m2;
        }
        if hi - lo < 1e-13 * (1.0 + hi.abs()) {
            break;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((x, envelope(x)?))
}

/// Internal beat period when two or more solitons share a velocity
/// (breather-pinned configurations), else `None`.
pub fn breather_period(solitons: &[SolitonParameters]) -> Option<f64> {
    let mut period: Option<f64> = None;
    for (i, a) in solitons.iter().enumerate() {
        for b in &solitons[i + 1..] {
            if (a.xi - b.xi).abs() < 1e-9 {
                let beat = (a.eta * a.eta - b.eta * b.eta).abs();
                if beat > 1e-12 {
                    let t = std::f64::consts::PI / (2.0 * beat);
                    period = Some(period.map_or(t, |p: f64| p.max(t)));
                }
            }
        }
    }
    period
}

/// Boundary decay samples: |u(t, 0)| at t in DECAY_TIMES, replaced by the
/// envelope maximum over one beat period for breather-pinned chains.
pub fn decay_samples(
    chain: &DressingChain,
    envelope_period: Option<f64>,
) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(DECAY_TIMES.len());
    for &t in DECAY_TIMES.iter() {
        let value = match envelope_period {
            None => dressed_u(chain, SpacetimePoint::new(t, 0.0))?.norm(),
            Some(period) => {
                let mut max = 0.0_f64;
                for k in 0..64 {
                    let tau = t + period * k as f64 / 64.0;
                    max = max.max(dressed_u(chain, SpacetimePoint::new(tau, 0.0))?.norm());
                }
                max
            }
        };
        out.push((t, value));
    }
    Ok(out)
}

/// Strict decrease (or everything at noise level) and a small final value.
pub fn decay_pass(samples: &[(f64, f64)]) -> bool {
    let all_noise = samples.iter().all(|&(_, v)| v < tol::DECAY_NOISE_FLOOR);
    let decreasing = samples.windows(2).all(|w| w[1].1 < w[0].1);
    let last_small = samples.last().is_some_and(|&(_, v)| v < tol::DECAY_CEILING);
    (decreasing || all_noise) && last_small
}

/// One named check of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckItem {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckItem {
    fn bounded(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            tolerance,
            pass: value.is_finite() && value <= tolerance,
        }
    }

    fn floored(name: &str, value: f64, floor: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            tolerance: floor,
            pass: value.is_finite() && value >= floor,
        }
    }

    fn boolean(name: &str, value: f64, tolerance: f64, pass: bool) -> Self {
        Self { name: name.to_string(), value, tolerance, pass }
    }
}

/// Bundle of all checks run on one boundary-chain configuration.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub checks: Vec<CheckItem>,
    pub grid: Grid,
    pub seed: u64,
    pub decay: Vec<(f64, f64)>,
}

impl ResidualReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&CheckItem> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Flat JSON: one key per check mapping to {value, tolerance, pass},
    /// plus grid/seed metadata.  Keys are emitted in sorted order, so the
    /// document is byte-stable for a given configuration and seed.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for c in &self.checks {
            map.insert(
                c.name.clone(),
                serde_json::json!({
                    "value": clamp_finite(c.value),
                    "tolerance": c.tolerance,
                    "pass": c.pass,
                }),
            );
        }
        map.insert(
            "grid".to_string(),
            serde_json::json!({
                "t_min": self.grid.t_min, "t_max": self.grid.t_max, "nt": self.grid.nt,
                "x_min": self.grid.x_min, "x_max": self.grid.x_max, "nx": self.grid.nx,
            }),
        );
        map.insert("seed".to_string(), serde_json::json!(self.seed));
        map.insert(
            "decay_samples".to_string(),
            serde_json::json!(self
                .decay
                .iter()
                .map(|&(t, v)| serde_json::json!({"t": t, "value": clamp_finite(v)}))
                .collect::<Vec<_>>()),
        );
        serde_json::Value::Object(map)
    }
}

fn clamp_finite(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        f64::MAX
    }
}

/// Run the complete verification suite on a boundary-chain configuration.
pub fn full_report(
    bc: &BoundaryCondition,
    solitons: &[SolitonParameters],
    grid: &Grid,
    seed: u64,
) -> Result<ResidualReport> {
    full_report_detuned(bc, solitons, grid, seed, 1.0)
}

/// Same as [`full_report`] with the mirror pairing factor multiplied by
/// `pairing_scale` (a deliberate defect when != 1).
pub fn full_report_detuned(
    bc: &BoundaryCondition,
    solitons: &[SolitonParameters],
    grid: &Grid,
    seed: u64,
    pairing_scale: f64,
) -> Result<ResidualReport> {
    bc.validate()?;
    let chain = build_boundary_chain_detuned(bc, solitons, pairing_scale)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    // --- PDE residual over the requested grid ---
    let pde = pde_residual_sweep(&chain, grid, crate::darboux::DERIVATIVE_STEP)?;
    checks.push(CheckItem::bounded("pde_residual", pde, tol::PDE_RESIDUAL));

    // --- boundary residual and Omega margin over t in [0, 10] ---
    let times = linspace(0.0, 10.0, 50);
    let boundary_tol = match bc {
        BoundaryCondition::Dirichlet => tol::DIRICHLET_RESIDUAL,
        _ => tol::BOUNDARY_RESIDUAL,
    };
    let mut boundary_worst = 0.0_f64;
    for &t in &times {
        match boundary_residual(bc, &chain, t) {
            Ok(r) => boundary_worst = boundary_worst.max(r),
            // a lost Omega branch is a boundary-condition failure, not a
            // reason to abort the report
            Err(Error::OmegaBranchViolation(_)) | Err(Error::EvaluationGuard(_)) => {
                boundary_worst = f64::INFINITY;
            }
            Err(e) => return Err(e),
        }
    }
    checks.push(CheckItem::bounded("boundary_residual", boundary_worst, boundary_tol));

    if let BoundaryCondition::New { beta, .. } = bc {
        let mut omega_min = f64::INFINITY;
        for &t in &times {
            let u = dressed_u(&chain, SpacetimePoint::new(t, 0.0))?;
            omega_min = omega_min.min(beta * beta - u.norm_sqr());
        }
        checks.push(CheckItem::floored("omega_margin", omega_min, -tol::OMEGA_SLACK));
    }

    // --- decay at the boundary ---
    let decay = decay_samples(&chain, breather_period(solitons))?;
    let decay_value = decay.last().map(|&(_, v)| v).unwrap_or(f64::INFINITY);
    checks.push(CheckItem::boolean(
        "boundary_decay",
        decay_value,
        tol::DECAY_CEILING,
        decay_pass(&decay),
    ));

    // --- dressed boundary matrix structure (New and Robin) ---
    if !matches!(bc, BoundaryCondition::Dirichlet) {
        let structure_tol = match bc {
            BoundaryCondition::Robin { .. } => tol::BOUNDARY_MATRIX_STRUCTURE_ROBIN,
            _ => tol::BOUNDARY_MATRIX_STRUCTURE,
        };
        let samples = circle_lambda_samples(12, 2.0, &chain_avoid_set(&chain));
        let mut worst: Option<crate::boundary::BoundaryMatrixStructure> = None;
        let mut structure_lost = false;
        for &t in &[0.4, 1.7] {
            match dressed_boundary_matrix_check(bc, &chain, t, &samples) {
                Ok(s) => {
                    worst = Some(match worst {
                        None => s,
                        Some(w) => {
                            if s.max_discrepancy() > w.max_discrepancy() {
                                s
                            } else {
                                w
                            }
                        }
                    });
                }
                // a broken pairing can push the dressed field outside the
                // admissible band; record the structure as lost instead of
                // aborting the report
                Err(Error::OmegaBranchViolation(_)) | Err(Error::EvaluationGuard(_)) => {
                    structure_lost = true;
                }
                Err(e) => return Err(e),
            }
        }
        let lost = |name: &str, checks: &mut Vec<CheckItem>| {
            checks.push(CheckItem::bounded(name, f64::INFINITY, structure_tol));
        };
        match worst {
            Some(s) if !structure_lost => {
                checks.push(CheckItem::bounded("boundary_matrix_degree_excess", s.excess_norm, structure_tol));
                checks.push(CheckItem::bounded("boundary_matrix_leading", s.leading_error, structure_tol));
                checks.push(CheckItem::bounded("boundary_matrix_constant", s.constant_error, structure_tol));
                if matches!(bc, BoundaryCondition::New { .. }) {
                    checks.push(CheckItem::bounded("boundary_matrix_offdiag", s.offdiag_error, structure_tol));
                    checks.push(CheckItem::bounded("boundary_matrix_diag", s.diag_error, structure_tol));
                    checks.push(CheckItem::bounded("boundary_matrix_omega_square", s.omega_square_error, structure_tol));
                }
                checks.push(CheckItem::bounded("boundary_matrix_det", s.det_error, structure_tol));
            }
            _ => {
                lost("boundary_matrix_degree_excess", &mut checks);
                lost("boundary_matrix_leading", &mut checks);
                lost("boundary_matrix_constant", &mut checks);
                if matches!(bc, BoundaryCondition::New { .. }) {
                    lost("boundary_matrix_offdiag", &mut checks);
                    lost("boundary_matrix_diag", &mut checks);
                    lost("boundary_matrix_omega_square", &mut checks);
                }
                lost("boundary_matrix_det", &mut checks);
            }
        }
    }

    // --- mirror relations: closed-form prediction vs chain extraction ---
    {
        let predicted = mirror_relations(bc, solitons)?;
        let extracted = extracted_mirror_relations_scaled(bc, solitons, pairing_scale)?;
        let mut dx = 0.0_f64;
        let mut dphi = 0.0_f64;
        let mut dw = 0.0_f64;
        for (p, e) in predicted.iter().zip(extracted.iter()) {
            dx = dx.max((p.x_sum - e.x_sum).abs());
            dphi = dphi.max(wrap_angle(p.phi_diff - e.phi_diff).abs());
            dw = dw.max(
                (p.weight_product - e.weight_product).norm() / p.weight_product.norm().max(1e-30),
            );
        }
        checks.push(CheckItem::bounded("mirror_centre_sum", dx, tol::MIRROR_RELATION));
        checks.push(CheckItem::bounded("mirror_phase_difference", dphi, tol::MIRROR_RELATION));
        checks.push(CheckItem::bounded("mirror_weight_product", dw, tol::WEIGHT_PRODUCT));
    }

    // --- pairing identity at x = 0 for 5 random times ---
    {
        let pairs = boundary_pairs(bc, solitons)?;
        let mut worst = 0.0_f64;
        for _ in 0..5 {
            let t = rng.gen_range(0.0..5.0);
            for pair in &pairs {
                // rebuild the pair with the requested detuning so the
                // check reflects the chain actually under test
                let scaled = if pairing_scale == 1.0 {
                    *pair
                } else {
                    scaled_pair(bc, pair, pairing_scale)?
                };
                worst = worst.max(scaled.pairing_residual(bc, t)?);
            }
        }
        checks.push(CheckItem::bounded("pairing_identity", worst, tol::PAIRING_CONSISTENCY));
    }

    // --- projector, kernel, determinant identities at random points ---
    {
        let mut proj_worst = 0.0_f64;
        let mut kernel_worst = 0.0_f64;
        let mut det_worst = 0.0_f64;
        let avoid = chain_avoid_set(&chain);
        for _ in 0..3 {
            let p = SpacetimePoint::new(rng.gen_range(0.0..3.0), rng.gen_range(0.0..10.0));
            let eval = evaluate_chain(&chain, p)?;
            for proj in &eval.projectors {
                proj_worst = proj_worst.max((*proj * *proj - *proj).max_norm());
                proj_worst = proj_worst.max((*proj - proj.adjoint()).max_norm());
            }
            for (lambda, v) in kernel_pairs(&chain, p) {
                let d = dressing_matrix(&chain, p, lambda)?;
                kernel_worst = kernel_worst.max(d.mul_vec(&v).norm() / v.norm());
            }
            for lambda in annulus_lambda_samples(&mut rng, 5, &avoid) {
                let d = dressing_matrix(&chain, p, lambda)?;
                let want = expected_determinant(&chain, lambda);
                det_worst = det_worst.max((d.det() - want).norm() / want.norm());
            }
        }
        checks.push(CheckItem::bounded("projector_identity", proj_worst, tol::ALGEBRAIC_IDENTITY));
        checks.push(CheckItem::bounded("kernel_annihilation", kernel_worst, tol::KERNEL_PROPERTY));
        checks.push(CheckItem::bounded("determinant_identity", det_worst, tol::DETERMINANT_IDENTITY));
    }

    // --- boundary matrix reflection property and defect factorisation ---
    if !matches!(bc, BoundaryCondition::Dirichlet) {
        let u_b = dressed_u(&chain, SpacetimePoint::new(1.0, 0.0))?;
        let mut avoid = chain_avoid_set(&chain);
        if let Some(l0) = bc.lambda0() {
            avoid.extend_from_slice(&[l0, -l0, l0.conj(), -l0.conj()]);
        }
        let samples = annulus_lambda_samples(&mut rng, 5, &avoid);
        let mut refl_worst = 0.0_f64;
        let mut defect_worst = 0.0_f64;
        for &lambda in &samples {
            let b1 = boundary_matrix(bc, u_b, lambda)?;
            let b2 = boundary_matrix(bc, u_b, -lambda)?;
            refl_worst = refl_worst.max((b1 * b2 - C2Matrix::identity()).max_norm());
            if matches!(bc, BoundaryCondition::New { .. }) {
                defect_worst = defect_worst.max(defect_factorization_check(bc, u_b, lambda)?);
            }
        }
        checks.push(CheckItem::bounded(
            "boundary_matrix_reflection",
            refl_worst,
            tol::ALGEBRAIC_IDENTITY,
        ));
        if matches!(bc, BoundaryCondition::New { .. }) {
            checks.push(CheckItem::bounded(
                "defect_factorization",
                defect_worst,
                tol::ALGEBRAIC_IDENTITY,
            ));
        }
    }

    // --- determinant-quotient oracle for the dressed field ---
    {
        let mut worst = 0.0_f64;
        let mut used = 0;
        for _ in 0..12 {
            if used >= 5 {
                break;
            }
            let p = SpacetimePoint::new(rng.gen_range(0.0..3.0), rng.gen_range(0.0..12.0));
            let direct = dressed_u(&chain, p)?;
            if direct.norm() <= tol::QUOTIENT_SUPPORT_FLOOR {
                continue;
            }
            let oracle = determinant_quotient_oracle(&chain, p)?;
            worst = worst.max((direct - oracle).norm() / direct.norm());
            used += 1;
        }
        checks.push(CheckItem::bounded("quotient_oracle", worst, tol::QUOTIENT_ORACLE));
    }

    Ok(ResidualReport { checks, grid: *grid, seed, decay })
}

/// Extraction with a detuned pairing: the closed-form weights of the
/// actually-built (possibly detuned) chain.
fn extracted_mirror_relations_scaled(
    bc: &BoundaryCondition,
    solitons: &[SolitonParameters],
    scale: f64,
) -> Result<Vec<crate::scattering::MirrorRelation>> {
    if scale == 1.0 {
        return extracted_mirror_relations(bc, solitons);
    }
    let chain = build_boundary_chain_detuned(bc, solitons, scale)?;
    let data = pure_soliton_data(&chain)?;
    Ok(solitons
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let product = data.weights()[2 * j] * data.weights()[2 * j + 1].conj();
            crate::scattering::MirrorRelation {
                x_sum: (product.norm() / (4.0 * s.eta * s.eta)).ln() / (2.0 * s.eta),
                phi_diff: product.arg(),
                weight_product: product,
            }
        })
        .collect())
}

fn scaled_pair(
    bc: &BoundaryCondition,
    pair: &crate::boundary::MirrorPair,
    scale: f64,
) -> Result<crate::boundary::MirrorPair> {
    crate::boundary::mirror_datum_detuned(bc, pair.physical(), scale)
}
