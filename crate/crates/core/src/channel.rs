//! Scenario geometry and channel realizations.
//!
//! The base station sits at the origin with a uniform linear array along the
//! y-axis; the surface is `bs_ris_distance` meters down the x-axis at the same
//! height; users are dropped uniformly in a square whose center is
//! `user_center_distance` meters from the base station. Large-scale gains
//! follow `PL(d) = PL₀ · d^(−a)` per link; the direct link also carries a fixed
//! obstruction loss.
//!
//! The base station to surface link is Rician (line-of-sight outer product of
//! half-wavelength steering vectors plus a Rayleigh part); the surface to user
//! and direct base station to user links are Rayleigh.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::fbl::FblParams;
use crate::linalg::{cmat_serde, cvecs_serde, CMatrix, CVector, C64};
use crate::{Error, Result};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Geometry {
    pub bs_height: f64,
    pub ris_height: f64,
    pub bs_ris_distance: f64,
    pub user_center_distance: f64,
    pub user_square_side: f64,
    pub user_height: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            bs_height: 25.0,
            ris_height: 25.0,
            bs_ris_distance: 1.0,
            user_center_distance: 130.0,
            user_square_side: 20.0,
            user_height: 1.5,
        }
    }
}

/// `PL(d) = ref_gain · d^(−exponent)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkLoss {
    pub ref_gain: f64,
    pub exponent: f64,
}

impl LinkLoss {
    pub fn gain(&self, distance: f64) -> f64 {
        self.ref_gain * distance.powf(-self.exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PathLoss {
    pub bs_ris: LinkLoss,
    pub ris_user: LinkLoss,
    pub direct: LinkLoss,
    /// Obstruction loss on the direct base station→user link, in dB.
    pub direct_blockage_db: f64,
    /// Extra factor on the user-side links (surface→user and base station→user).
    pub user_gain_scale: f64,
}

impl PathLoss {
    /// Direct-link gain including the obstruction loss.
    pub fn direct_gain(&self, distance: f64) -> f64 {
        self.direct.gain(distance) * db_to_linear(-self.direct_blockage_db)
    }
}

impl Default for PathLoss {
    fn default() -> Self {
        Self {
            bs_ris: LinkLoss {
                ref_gain: 1e-3,
                exponent: 2.2,
            },
            ris_user: LinkLoss {
                ref_gain: 1e-3,
                exponent: 3.75,
            },
            direct: LinkLoss {
                ref_gain: 1e-3,
                exponent: 3.75,
            },
            direct_blockage_db: 25.0,
            user_gain_scale: 1.0,
        }
    }
}

/// All scenario parameters of one simulated system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub num_tx_antennas: usize,
    pub num_ris_elements: usize,
    pub num_users: usize,
    /// Watts.
    pub power_budget: f64,
    /// Watts.
    pub noise_power: f64,
    pub block_length: u32,
    pub error_prob: f64,
    pub rician_factor: f64,
    pub geometry: Geometry,
    pub path_loss: PathLoss,
    pub rng_seed: u64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            num_tx_antennas: 6,
            num_ris_elements: 20,
            num_users: 4,
            power_budget: db_to_linear(10.0),
            noise_power: dbm_to_watts(-90.0),
            block_length: 256,
            error_prob: 1e-5,
            rician_factor: 10.0,
            geometry: Geometry::default(),
            path_loss: PathLoss::default(),
            rng_seed: 0,
        }
    }
}

impl SystemConfig {
    pub fn with_power_db(mut self, db: f64) -> Self {
        self.power_budget = db_to_linear(db);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_tx_antennas == 0 {
            return Err(Error::invalid("num_tx_antennas", "must be at least 1"));
        }
        if self.num_ris_elements == 0 {
            return Err(Error::invalid("num_ris_elements", "must be at least 1"));
        }
        if self.num_users == 0 {
            return Err(Error::invalid("num_users", "must be at least 1"));
        }
        if !(self.power_budget > 0.0 && self.power_budget.is_finite()) {
            return Err(Error::invalid("power_budget", format!("{} must be > 0", self.power_budget)));
        }
        if !(self.noise_power > 0.0 && self.noise_power.is_finite()) {
            return Err(Error::invalid("noise_power", format!("{} must be > 0", self.noise_power)));
        }
        if self.block_length == 0 {
            return Err(Error::invalid("block_length", "must be at least 1"));
        }
        if !(self.error_prob > 0.0 && self.error_prob < 0.5) {
            return Err(Error::invalid("error_prob", format!("{} is outside (0, 0.5)", self.error_prob)));
        }
        if !(self.rician_factor >= 0.0) {
            return Err(Error::invalid("rician_factor", "must be nonnegative"));
        }
        let g = &self.geometry;
        for (name, v) in [
            ("geometry.bs_ris_distance", g.bs_ris_distance),
            ("geometry.user_center_distance", g.user_center_distance),
        ] {
            if !(v > 0.0) {
                return Err(Error::invalid("geometry", format!("{name} must be > 0")));
            }
        }
        if !(g.user_square_side >= 0.0) {
            return Err(Error::invalid("geometry", "user_square_side must be >= 0"));
        }
        let pl = &self.path_loss;
        for link in [pl.bs_ris, pl.ris_user, pl.direct] {
            if !(link.ref_gain > 0.0 && link.exponent >= 0.0) {
                return Err(Error::invalid("path_loss", "reference gains must be > 0, exponents >= 0"));
            }
        }
        if !pl.direct_blockage_db.is_finite() {
            return Err(Error::invalid("path_loss", "direct_blockage_db must be finite"));
        }
        if !(pl.user_gain_scale > 0.0) {
            return Err(Error::invalid("path_loss", "user_gain_scale must be > 0"));
        }
        Ok(())
    }

    pub fn fbl_params(&self) -> Result<FblParams> {
        FblParams::new(self.block_length, self.error_prob)
    }

    /// Unit noise, with the user-side gains rescaled so that the median
    /// direct-link per-antenna receive SNR over the user square is 10 dB at
    /// a 10 dB power budget.
    pub fn normalized(mut self) -> Self {
        self.noise_power = 1.0;
        self.path_loss.user_gain_scale = 1.0;
        let g = self.geometry;
        let steps = 21;
        let mut snrs = Vec::with_capacity(steps * steps);
        for i in 0..steps {
            for j in 0..steps {
                let u = (i as f64 / (steps - 1) as f64 - 0.5) * g.user_square_side;
                let v = (j as f64 / (steps - 1) as f64 - 0.5) * g.user_square_side;
                let d = distance3(
                    [0.0, 0.0, g.bs_height],
                    [g.user_center_distance + u, v, g.user_height],
                );
                snrs.push(db_to_linear(10.0) * self.path_loss.direct_gain(d));
            }
        }
        snrs.sort_by(f64::total_cmp);
        let median = snrs[snrs.len() / 2];
        self.path_loss.user_gain_scale = db_to_linear(10.0) / median;
        self
    }

    pub fn seeded_rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.rng_seed)
    }
}

fn distance3(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Node positions (meters) and derived 3-D link distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub bs: [f64; 3],
    pub ris: [f64; 3],
    pub users: Vec<[f64; 3]>,
    pub bs_ris_distance: f64,
    pub ris_user_distances: Vec<f64>,
    pub bs_user_distances: Vec<f64>,
}

impl Scenario {
    pub fn from_positions(bs: [f64; 3], ris: [f64; 3], users: Vec<[f64; 3]>) -> Self {
        let ris_user_distances = users.iter().map(|u| distance3(ris, *u)).collect();
        let bs_user_distances = users.iter().map(|u| distance3(bs, *u)).collect();
        Self {
            bs,
            ris,
            bs_ris_distance: distance3(bs, ris),
            users,
            ris_user_distances,
            bs_user_distances,
        }
    }

    /// Azimuth (radians from the +x broadside) of the surface seen from the base station.
    pub fn departure_angle(&self) -> f64 {
        (self.ris[1] - self.bs[1]).atan2(self.ris[0] - self.bs[0])
    }

    /// Azimuth of the base station seen from the surface, relative to the surface broadside (+x).
    pub fn arrival_angle(&self) -> f64 {
        (self.bs[1] - self.ris[1]).atan2(self.bs[0] - self.ris[0])
    }
}

pub fn generate_scenario<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> Scenario {
    let g = &config.geometry;
    let bs = [0.0, 0.0, g.bs_height];
    let ris = [g.bs_ris_distance, 0.0, g.ris_height];
    let half = 0.5 * g.user_square_side;
    let users = (0..config.num_users)
        .map(|_| {
            let x = g.user_center_distance + rng.random_range(-half..=half);
            let y = rng.random_range(-half..=half);
            [x, y, g.user_height]
        })
        .collect();
    Scenario::from_positions(bs, ris, users)
}

fn circular_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(s * re, s * im)
}

/// Half-wavelength uniform linear array response at azimuth `angle`.
pub fn steering_vector(len: usize, angle: f64) -> CVector {
    let phase = std::f64::consts::PI * angle.sin();
    CVector::from_fn(len, |m, _| C64::from_polar(1.0, phase * m as f64))
}

/// iid `CN(0, gain)` entries.
pub fn rayleigh_vector<R: Rng + ?Sized>(len: usize, gain: f64, rng: &mut R) -> Result<CVector> {
    if len == 0 {
        return Err(Error::invalid("len", "must be at least 1"));
    }
    if !(gain > 0.0 && gain.is_finite()) {
        return Err(Error::invalid("large_scale_gain", format!("{gain} must be > 0")));
    }
    Ok(CVector::from_fn(len, |_, _| circular_gaussian(rng, gain)))
}

/// `sqrt(gain) · (sqrt(κ/(1+κ)) a_rx a_txᴴ + sqrt(1/(1+κ)) G)` with `G` iid `CN(0, 1)`.
///
/// `κ = ∞` yields the pure line-of-sight matrix and consumes no randomness.
pub fn rician_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    kappa: f64,
    gain: f64,
    arrival_angle: f64,
    departure_angle: f64,
    rng: &mut R,
) -> Result<CMatrix> {
    if !(kappa >= 0.0) {
        return Err(Error::invalid("rician_factor", "must be nonnegative"));
    }
    let a_rx = steering_vector(rows, arrival_angle);
    let a_tx = steering_vector(cols, departure_angle);
    let los = &a_rx * a_tx.adjoint();
    let amp = gain.sqrt();
    if kappa.is_infinite() {
        return Ok(los * C64::from(amp));
    }
    let w_los = (kappa / (1.0 + kappa)).sqrt();
    let w_nlos = (1.0 / (1.0 + kappa)).sqrt();
    let nlos = DMatrix::from_fn(rows, cols, |_, _| circular_gaussian(rng, 1.0));
    Ok((los * C64::from(w_los) + nlos * C64::from(w_nlos)) * C64::from(amp))
}

/// One channel realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSet {
    /// M×N base station → surface matrix.
    #[serde(with = "cmat_serde")]
    pub bs_ris: CMatrix,
    /// Per user, the 1×M surface → user row (stored as a column of length M).
    #[serde(with = "cvecs_serde")]
    pub ris_user: Vec<CVector>,
    /// Per user, the 1×N direct row; only the baseline without a surface uses it.
    #[serde(with = "cvecs_serde")]
    pub direct: Vec<CVector>,
}

impl ChannelSet {
    pub fn num_tx(&self) -> usize {
        self.bs_ris.ncols()
    }

    pub fn num_ris(&self) -> usize {
        self.bs_ris.nrows()
    }

    pub fn num_users(&self) -> usize {
        self.ris_user.len()
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n) = self.bs_ris.shape();
        if self.ris_user.len() != self.direct.len() {
            return Err(Error::Dimension(format!(
                "{} surface rows but {} direct rows",
                self.ris_user.len(),
                self.direct.len()
            )));
        }
        if let Some((k, f)) = self.ris_user.iter().enumerate().find(|(_, f)| f.len() != m) {
            return Err(Error::Dimension(format!("surface row {k} has length {}, expected {m}", f.len())));
        }
        if let Some((k, g)) = self.direct.iter().enumerate().find(|(_, g)| g.len() != n) {
            return Err(Error::Dimension(format!("direct row {k} has length {}, expected {n}", g.len())));
        }
        let finite = |c: &C64| c.re.is_finite() && c.im.is_finite();
        if !self.bs_ris.iter().all(finite)
            || !self.ris_user.iter().flatten().all(finite)
            || !self.direct.iter().flatten().all(finite)
        {
            return Err(Error::invalid("channels", "non-finite entry"));
        }
        Ok(())
    }

    /// Same channels with the surface truncated to its first `m` elements.
    pub fn truncated(&self, m: usize) -> Self {
        Self {
            bs_ris: self.bs_ris.rows(0, m).into_owned(),
            ris_user: self.ris_user.iter().map(|f| f.rows(0, m).into_owned()).collect(),
            direct: self.direct.clone(),
        }
    }
}

/// Draws the surface link, then every surface→user row, then every direct row.
pub fn draw_channels<R: Rng + ?Sized>(
    config: &SystemConfig,
    scenario: &Scenario,
    rng: &mut R,
) -> Result<ChannelSet> {
    let pl = &config.path_loss;
    let bs_ris = rician_matrix(
        config.num_ris_elements,
        config.num_tx_antennas,
        config.rician_factor,
        pl.bs_ris.gain(scenario.bs_ris_distance),
        scenario.arrival_angle(),
        scenario.departure_angle(),
        rng,
    )?;
    let ris_user = scenario
        .ris_user_distances
        .iter()
        .map(|&d| rayleigh_vector(config.num_ris_elements, pl.user_gain_scale * pl.ris_user.gain(d), rng))
        .collect::<Result<Vec<_>>>()?;
    let direct = scenario
        .bs_user_distances
        .iter()
        .map(|&d| rayleigh_vector(config.num_tx_antennas, pl.user_gain_scale * pl.direct_gain(d), rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelSet {
        bs_ris,
        ris_user,
        direct,
    })
}

/// Scenario plus channels, serializable as a test fixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub scenario: Scenario,
    pub channels: ChannelSet,
}

impl Instance {
    /// Deterministic draw from `(config, seed)`.
    pub fn draw(config: &SystemConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scenario = generate_scenario(config, &mut rng);
        let channels = draw_channels(config, &scenario, &mut rng)?;
        Ok(Self { scenario, channels })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let inst: Self = serde_json::from_str(s)?;
        inst.channels.validate()?;
        Ok(inst)
    }
}

/// `f_k Φ F` as a length-N column.
pub fn effective_channel(bs_ris: &CMatrix, ris_user: &CVector, phi: &CMatrix) -> Result<CVector> {
    let m = bs_ris.nrows();
    if ris_user.len() != m || phi.shape() != (m, m) {
        return Err(Error::Dimension(format!(
            "F is {}x{}, f has length {}, Φ is {}x{}",
            m,
            bs_ris.ncols(),
            ris_user.len(),
            phi.nrows(),
            phi.ncols()
        )));
    }
    let f_phi = phi.tr_mul(ris_user);
    Ok(bs_ris.tr_mul(&f_phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_user_distance() {
        let g = Geometry::default();
        let s = Scenario::from_positions(
            [0.0, 0.0, g.bs_height],
            [g.bs_ris_distance, 0.0, g.ris_height],
            vec![[130.0, 0.0, 1.5]],
        );
        let expected = (130f64.powi(2) + 23.5f64.powi(2)).sqrt();
        assert!((s.bs_user_distances[0] - expected).abs() < 1e-12);
        assert!((s.bs_user_distances[0] - 132.107).abs() < 1e-3);
        assert!((s.bs_ris_distance - 1.0).abs() < 1e-15);
    }

    #[test]
    fn users_stay_in_square_and_are_reproducible() {
        let cfg = SystemConfig {
            num_users: 50,
            ..Default::default()
        };
        let a = generate_scenario(&cfg, &mut ChaCha8Rng::seed_from_u64(7));
        let b = generate_scenario(&cfg, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
        for u in &a.users {
            assert!((120.0..=140.0).contains(&u[0]));
            assert!((-10.0..=10.0).contains(&u[1]));
            assert_eq!(u[2], 1.5);
        }
    }

    #[test]
    fn rayleigh_rejects_bad_gain() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(rayleigh_vector(4, 0.0, &mut rng).is_err());
        assert!(rayleigh_vector(0, 1.0, &mut rng).is_err());
        let a = rayleigh_vector(4, 1.0, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = rayleigh_vector(4, 1.0, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pure_los_has_unit_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = rician_matrix(5, 3, f64::INFINITY, 1.0, 0.3, -0.7, &mut rng).unwrap();
        for x in f.iter() {
            assert!((x.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn effective_channel_identities() {
        let cfg = SystemConfig::default();
        let inst = Instance::draw(&cfg, 3).unwrap();
        let ch = &inst.channels;
        let m = ch.num_ris();
        let id = CMatrix::identity(m, m);
        let h = effective_channel(&ch.bs_ris, &ch.ris_user[0], &id).unwrap();
        let direct = ch.bs_ris.tr_mul(&ch.ris_user[0]);
        assert!((h - direct).norm() < 1e-20);
        let z = effective_channel(&ch.bs_ris, &ch.ris_user[0], &CMatrix::zeros(m, m)).unwrap();
        assert_eq!(z.norm(), 0.0);
        assert!(effective_channel(&ch.bs_ris, &ch.ris_user[0], &CMatrix::zeros(m + 1, m + 1)).is_err());
    }

    #[test]
    fn effective_channel_scalar() {
        let f = CMatrix::from_element(1, 1, C64::new(3.0, 0.0));
        let r = CVector::from_element(1, C64::new(2.0, 0.0));
        let phi = CMatrix::from_element(1, 1, C64::new(0.0, 0.5));
        let h = effective_channel(&f, &r, &phi).unwrap();
        assert!((h[0] - C64::new(0.0, 3.0)).norm() < 1e-15);
    }

    #[test]
    fn fixture_json_round_trip() {
        let cfg = SystemConfig {
            num_tx_antennas: 2,
            num_ris_elements: 3,
            num_users: 2,
            ..Default::default()
        };
        let inst = Instance::draw(&cfg, 11).unwrap();
        let json = inst.to_json().unwrap();
        assert!(json.contains("\"bs_ris\""));
        let back = Instance::from_json(&json).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SystemConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.error_prob = 0.7;
        assert!(cfg.validate().is_err());
        cfg.error_prob = 1e-5;
        cfg.power_budget = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn normalized_mode_pins_median_direct_snr() {
        let cfg = SystemConfig::default().normalized();
        assert_eq!(cfg.noise_power, 1.0);
        let g = cfg.geometry;
        let d = distance3([0.0, 0.0, g.bs_height], [g.user_center_distance, 0.0, g.user_height]);
        let snr = 10.0 * cfg.path_loss.user_gain_scale * cfg.path_loss.direct_gain(d);
        // the center of the square is the median distance up to grid granularity
        assert!((linear_to_db(snr) - 10.0).abs() < 0.3, "{snr}");
    }
}
