//! Network topology generation and beamspace channel gains.
//!
//! A topology places `L` access points and `K` users uniformly at random in
//! a planar region. Each AP `l` carries `N_l` preformed beams; the gain from
//! beam `n` to user `k` is `d^{-alpha} * D` where `d` is the user-to-AP
//! distance and `D` the beam pattern gain at the user's angle. Two special
//! cases get dedicated constructors: single-antenna APs (`D = 1`, one beam
//! per AP) and a single AP at the cell center with a DFT beam codebook.

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::rng::rng_from;

/// Distances are clamped below at this value before applying the power law,
/// so a user sampled arbitrarily close to an AP cannot produce an unbounded
/// gain. Small against the unit-scale default regions, so it only ever binds
/// on near-co-location.
pub const MIN_DISTANCE: f64 = 1e-3;

/// Threshold on `|sin((pi/2) cos(theta) - psi_n / N)|` below which the DFT
/// beam gain is evaluated as its analytic limit `N` (removable singularity
/// at the beam center).
const BEAM_CENTER_EPS: f64 = 1e-9;

/// A 2-D point in meters.
pub type Point = [f64; 2];

fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Deployment region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// Axis-aligned square `[0, side] x [0, side]`.
    Square { side: f64 },
    /// Disc of the given radius centered at the origin.
    Disc { radius: f64 },
}

impl Region {
    /// Unit square, the default for multi-AP deployments.
    pub fn unit_square() -> Self {
        Region::Square { side: 1.0 }
    }

    /// Unit disc, the default for the single-cell deployment.
    pub fn unit_disc() -> Self {
        Region::Disc { radius: 1.0 }
    }

    pub fn area(&self) -> f64 {
        match *self {
            Region::Square { side } => side * side,
            Region::Disc { radius } => std::f64::consts::PI * radius * radius,
        }
    }

    /// Center of the region (AP location in the single-cell case).
    pub fn center(&self) -> Point {
        match *self {
            Region::Square { side } => [side / 2.0, side / 2.0],
            Region::Disc { .. } => [0.0, 0.0],
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Region::Square { side } => {
                (0.0..=side).contains(&p[0]) && (0.0..=side).contains(&p[1])
            }
            Region::Disc { radius } => p[0] * p[0] + p[1] * p[1] <= radius * radius * (1.0 + 1e-12),
        }
    }

    /// Draw a uniform point. Discs use the sqrt-radius transform so the
    /// draw count per point is fixed and seed-reproducible.
    fn sample(&self, rng: &mut impl Rng) -> Point {
        match *self {
            Region::Square { side } => {
                let x: f64 = rng.random();
                let y: f64 = rng.random();
                [x * side, y * side]
            }
            Region::Disc { radius } => {
                let u: f64 = rng.random();
                let v: f64 = rng.random();
                let r = radius * u.sqrt();
                let phi = 2.0 * std::f64::consts::PI * v;
                [r * phi.cos(), r * phi.sin()]
            }
        }
    }
}

/// Positions of users and APs plus the beam layout. Immutable once built;
/// safe to share read-only across parallel workers.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub region: Region,
    pub ap_positions: Vec<Point>,
    pub user_positions: Vec<Point>,
    pub beams_per_ap: Vec<usize>,
    pub seed: u64,
}

impl Topology {
    /// Validating constructor for explicitly placed nodes.
    pub fn new(
        region: Region,
        ap_positions: Vec<Point>,
        user_positions: Vec<Point>,
        beams_per_ap: Vec<usize>,
        seed: u64,
    ) -> Result<Self> {
        if region.area() <= 0.0 {
            return Err(Error::ZeroAreaRegion);
        }
        if ap_positions.is_empty() || user_positions.is_empty() {
            return Err(Error::InvalidParameter(
                "need at least one AP and one user".into(),
            ));
        }
        if beams_per_ap.len() != ap_positions.len() {
            return Err(Error::InvalidParameter(format!(
                "beams_per_ap has {} entries for {} APs",
                beams_per_ap.len(),
                ap_positions.len()
            )));
        }
        if beams_per_ap.contains(&0) {
            return Err(Error::InvalidParameter(
                "every AP must have at least one beam".into(),
            ));
        }
        for (i, &p) in ap_positions.iter().chain(&user_positions).enumerate() {
            if !region.contains(p) {
                return Err(Error::InvalidParameter(format!(
                    "position #{i} ({}, {}) lies outside the region",
                    p[0], p[1]
                )));
            }
        }
        Ok(Topology {
            region,
            ap_positions,
            user_positions,
            beams_per_ap,
            seed,
        })
    }

    pub fn num_aps(&self) -> usize {
        self.ap_positions.len()
    }

    pub fn num_users(&self) -> usize {
        self.user_positions.len()
    }

    /// Total beam count `N`.
    pub fn num_beams(&self) -> usize {
        self.beams_per_ap.iter().sum()
    }

    /// Owning AP of each beam, beams numbered AP-major.
    pub fn beam_owners(&self) -> Vec<usize> {
        let mut owners = Vec::with_capacity(self.num_beams());
        for (ap, &n) in self.beams_per_ap.iter().enumerate() {
            owners.extend(std::iter::repeat_n(ap, n));
        }
        owners
    }

    /// Plain-text serialization; see the crate README for the format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed {}", self.seed);
        match self.region {
            Region::Square { side } => {
                let _ = writeln!(out, "region square {side}");
            }
            Region::Disc { radius } => {
                let _ = writeln!(out, "region disc {radius}");
            }
        }
        let beams: Vec<String> = self.beams_per_ap.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(out, "beams_per_ap {}", beams.join(" "));
        let aps: Vec<String> = self
            .ap_positions
            .iter()
            .map(|p| format!("{},{}", p[0], p[1]))
            .collect();
        let _ = writeln!(out, "ap_positions {}", aps.join(" "));
        let users: Vec<String> = self
            .user_positions
            .iter()
            .map(|p| format!("{},{}", p[0], p[1]))
            .collect();
        let _ = writeln!(out, "user_positions {}", users.join(" "));
        out
    }

    /// Parse the plain-text serialization produced by [`Topology::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut seed = None;
        let mut region = None;
        let mut beams = None;
        let mut aps = None;
        let mut users = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap();
            match key {
                "seed" => {
                    let v = parts.next().ok_or_else(|| Error::Parse("seed value".into()))?;
                    seed = Some(v.parse::<u64>().map_err(|e| Error::Parse(e.to_string()))?);
                }
                "region" => {
                    let shape = parts.next().ok_or_else(|| Error::Parse("region shape".into()))?;
                    let size: f64 = parts
                        .next()
                        .ok_or_else(|| Error::Parse("region size".into()))?
                        .parse()
                        .map_err(|e: std::num::ParseFloatError| Error::Parse(e.to_string()))?;
                    region = Some(match shape {
                        "square" => Region::Square { side: size },
                        "disc" => Region::Disc { radius: size },
                        other => return Err(Error::Parse(format!("unknown region '{other}'"))),
                    });
                }
                "beams_per_ap" => {
                    let v: std::result::Result<Vec<usize>, _> =
                        parts.map(str::parse::<usize>).collect();
                    beams = Some(v.map_err(|e| Error::Parse(e.to_string()))?);
                }
                "ap_positions" => aps = Some(parse_points(parts)?),
                "user_positions" => users = Some(parse_points(parts)?),
                other => return Err(Error::Parse(format!("unknown key '{other}'"))),
            }
        }
        let missing = |what: &str| Error::Parse(format!("missing key '{what}'"));
        Topology::new(
            region.ok_or_else(|| missing("region"))?,
            aps.ok_or_else(|| missing("ap_positions"))?,
            users.ok_or_else(|| missing("user_positions"))?,
            beams.ok_or_else(|| missing("beams_per_ap"))?,
            seed.ok_or_else(|| missing("seed"))?,
        )
    }
}

fn parse_points<'a>(parts: impl Iterator<Item = &'a str>) -> Result<Vec<Point>> {
    let mut points = Vec::new();
    for token in parts {
        let (x, y) = token
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected 'x,y', got '{token}'")))?;
        let x: f64 = x.parse().map_err(|e: std::num::ParseFloatError| Error::Parse(e.to_string()))?;
        let y: f64 = y.parse().map_err(|e: std::num::ParseFloatError| Error::Parse(e.to_string()))?;
        points.push([x, y]);
    }
    Ok(points)
}

/// Beamspace channel power gains `|g_{k,n}|^2` for every user-beam pair,
/// along with the owning AP of each beam column.
#[derive(Debug, Clone, PartialEq)]
pub struct GainMatrix {
    pub values: Mat,
    pub beam_owner: Vec<usize>,
}

impl GainMatrix {
    pub fn num_users(&self) -> usize {
        self.values.rows()
    }

    pub fn num_beams(&self) -> usize {
        self.values.cols()
    }

    /// Index and value of the strongest beam of user `k`, ties broken by
    /// the lowest beam index.
    pub fn row_max(&self, k: usize) -> (usize, f64) {
        let row = self.values.row(k);
        let mut best = 0;
        for (n, &g) in row.iter().enumerate() {
            if g > row[best] {
                best = n;
            }
        }
        (best, row[best])
    }
}

/// Draw `L` AP positions followed by `K` user positions, i.i.d. uniform in
/// the region. Deterministic in `seed`.
pub fn generate_topology(
    seed: u64,
    region: Region,
    num_aps: usize,
    num_users: usize,
    beams_per_ap: Vec<usize>,
) -> Result<Topology> {
    if region.area() <= 0.0 {
        return Err(Error::ZeroAreaRegion);
    }
    if num_aps == 0 || num_users == 0 {
        return Err(Error::InvalidParameter(
            "AP and user counts must be positive".into(),
        ));
    }
    let mut rng = rng_from(seed);
    let ap_positions: Vec<Point> = (0..num_aps).map(|_| region.sample(&mut rng)).collect();
    let user_positions: Vec<Point> = (0..num_users).map(|_| region.sample(&mut rng)).collect();
    Topology::new(region, ap_positions, user_positions, beams_per_ap, seed)
}

/// Path-loss-only gains for single-antenna APs: `g = d^{-alpha}` with the
/// user-to-AP distance clamped below at [`MIN_DISTANCE`].
///
/// Requires one beam per AP.
pub fn cellfree_gains(topology: &Topology, alpha: f64) -> Result<GainMatrix> {
    if topology.beams_per_ap.iter().any(|&n| n != 1) {
        return Err(Error::InvalidParameter(
            "cellfree_gains requires exactly one beam per AP".into(),
        ));
    }
    if alpha < 0.0 {
        return Err(Error::InvalidParameter("alpha must be non-negative".into()));
    }
    let k = topology.num_users();
    let l = topology.num_aps();
    let values = Mat::from_fn(k, l, |u, a| {
        let d = dist(topology.user_positions[u], topology.ap_positions[a]).max(MIN_DISTANCE);
        d.powf(-alpha)
    });
    Ok(GainMatrix {
        values,
        beam_owner: (0..l).collect(),
    })
}

/// Power gain of DFT beam `beam_index` (1-based, numbered left to right) of
/// an `n_beams`-element half-wavelength linear array, at direction cosine
/// `cos_theta`.
///
/// `D = sin^2((N pi / 2) c - psi_n) / (N sin^2((pi/2) c - psi_n / N))` with
/// `psi_n = (-(N+1)/2 + n) pi`; the removable singularity at the beam center
/// evaluates to the limit `N`.
pub fn dft_beam_gain(cos_theta: f64, beam_index: usize, n_beams: usize) -> f64 {
    assert!(n_beams >= 1, "beam count must be positive");
    assert!(
        (1..=n_beams).contains(&beam_index),
        "beam index {beam_index} out of 1..={n_beams}"
    );
    let n = n_beams as f64;
    let psi = (-(n + 1.0) / 2.0 + beam_index as f64) * std::f64::consts::PI;
    let x = std::f64::consts::FRAC_PI_2 * cos_theta - psi / n;
    let denom_sin = x.sin();
    if denom_sin.abs() < BEAM_CENTER_EPS {
        return n;
    }
    let num_sin = (n * std::f64::consts::FRAC_PI_2 * cos_theta - psi).sin();
    (num_sin * num_sin) / (n * denom_sin * denom_sin)
}

/// Direction cosine of the main lobe of DFT beam `beam_index` (1-based):
/// the maximizer of [`dft_beam_gain`], `(2 n - N - 1) / N`.
pub fn dft_beam_direction(beam_index: usize, n_beams: usize) -> f64 {
    (2.0 * beam_index as f64 - n_beams as f64 - 1.0) / n_beams as f64
}

/// Gains for a single AP at the region center with a DFT beam codebook:
/// `g = d^{-alpha} * D(cos theta, n)`.
pub fn singlecell_gains(topology: &Topology, alpha: f64) -> Result<GainMatrix> {
    if topology.num_aps() != 1 {
        return Err(Error::InvalidParameter(
            "singlecell_gains requires exactly one AP".into(),
        ));
    }
    let n_beams = topology.beams_per_ap[0];
    let center = topology.ap_positions[0];
    let k = topology.num_users();
    let mut values = Mat::zeros(k, n_beams);
    for u in 0..k {
        let p = topology.user_positions[u];
        let d = dist(p, center);
        if d == 0.0 {
            return Err(Error::UserAtAp { user: u, ap: 0 });
        }
        let cos_theta = (p[0] - center[0]) / d;
        let path = d.max(MIN_DISTANCE).powf(-alpha);
        for b in 0..n_beams {
            values[(u, b)] = path * dft_beam_gain(cos_theta, b + 1, n_beams);
        }
    }
    Ok(GainMatrix {
        values,
        beam_owner: vec![0; n_beams],
    })
}

/// Gains for the general multi-AP multi-beam layout. Single-beam APs use the
/// omnidirectional pattern (`D = 1`); multi-beam APs use the DFT codebook of
/// their own size, with the user's direction cosine taken relative to the
/// owning AP.
pub fn general_gains(topology: &Topology, alpha: f64) -> Result<GainMatrix> {
    let k = topology.num_users();
    let n = topology.num_beams();
    let beam_owner = topology.beam_owners();
    let mut values = Mat::zeros(k, n);
    for u in 0..k {
        let p = topology.user_positions[u];
        let mut col = 0;
        for (ap, &n_l) in topology.beams_per_ap.iter().enumerate() {
            let a = topology.ap_positions[ap];
            let d = dist(p, a);
            let path = d.max(MIN_DISTANCE).powf(-alpha);
            if n_l == 1 {
                values[(u, col)] = path;
            } else {
                if d == 0.0 {
                    return Err(Error::UserAtAp { user: u, ap });
                }
                let cos_theta = (p[0] - a[0]) / d;
                for b in 0..n_l {
                    values[(u, col + b)] = path * dft_beam_gain(cos_theta, b + 1, n_l);
                }
            }
            col += n_l;
        }
    }
    Ok(GainMatrix { values, beam_owner })
}

/// Deployment scenario selecting region default, beam layout, and gain model.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    /// `L` single-antenna APs in a square region.
    CellFree { aps: usize },
    /// One AP at the center of a disc with an `N`-beam DFT codebook.
    SingleCell { beams: usize },
    /// Arbitrary per-AP beam counts in a square region.
    General { beams_per_ap: Vec<usize> },
}

impl Scenario {
    /// Default region for the scenario, scaled by `size` (side or radius).
    pub fn region(&self, size: f64) -> Region {
        match self {
            Scenario::SingleCell { .. } => Region::Disc { radius: size },
            _ => Region::Square { side: size },
        }
    }

    pub fn beams_per_ap(&self) -> Vec<usize> {
        match self {
            Scenario::CellFree { aps } => vec![1; *aps],
            Scenario::SingleCell { beams } => vec![*beams],
            Scenario::General { beams_per_ap } => beams_per_ap.clone(),
        }
    }

    pub fn num_beams(&self) -> usize {
        self.beams_per_ap().iter().sum()
    }

    /// Generate a topology for this scenario. The single-cell AP sits at the
    /// region center rather than being drawn at random.
    pub fn generate(&self, users: usize, region: Region, seed: u64) -> Result<Topology> {
        match self {
            Scenario::SingleCell { beams } => {
                let mut rng = rng_from(seed);
                let mut user_positions = Vec::with_capacity(users);
                for _ in 0..users {
                    // Re-draw the (measure-zero) exact-center case so beam
                    // angles are always defined.
                    loop {
                        let p = region.sample(&mut rng);
                        if p != region.center() {
                            user_positions.push(p);
                            break;
                        }
                    }
                }
                Topology::new(
                    region,
                    vec![region.center()],
                    user_positions,
                    vec![*beams],
                    seed,
                )
            }
            Scenario::CellFree { aps } => {
                generate_topology(seed, region, *aps, users, vec![1; *aps])
            }
            Scenario::General { beams_per_ap } => generate_topology(
                seed,
                region,
                beams_per_ap.len(),
                users,
                beams_per_ap.clone(),
            ),
        }
    }

    /// Gain model matching the scenario.
    pub fn gains(&self, topology: &Topology, alpha: f64) -> Result<GainMatrix> {
        match self {
            Scenario::CellFree { .. } => cellfree_gains(topology, alpha),
            Scenario::SingleCell { .. } => singlecell_gains(topology, alpha),
            Scenario::General { .. } => general_gains(topology, alpha),
        }
    }
}
