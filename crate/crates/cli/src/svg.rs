//! SVG snapshots of a decomposed network.
//!
//! Cell-free style: one marker per node (circles for users, triangles for
//! APs) colored by subnetwork; beams of user-free subnetworks are drawn
//! hollow. Single-cell style: the cell disc with one angular sector per
//! beam (covering the beam's share of direction-cosine space, mirrored
//! about the array axis) plus the users; sectors of inactive beams are
//! drawn with dashed outlines and no fill.

use std::fmt::Write as _;

use netdecomp_core::{dft_beam_direction, Partition, Region, Topology};

use crate::error::{CliError, Result};

/// Marker style of a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotStyle {
    CellFree,
    SingleCell,
}

impl SnapshotStyle {
    /// Single-cell layouts (one AP) render as a beam-sector disc.
    pub fn for_topology(topology: &Topology) -> Self {
        if topology.num_aps() == 1 && topology.beams_per_ap[0] > 1 {
            SnapshotStyle::SingleCell
        } else {
            SnapshotStyle::CellFree
        }
    }
}

const CANVAS: f64 = 640.0;
const MARGIN: f64 = 40.0;

/// Deterministic palette indexed by canonical subnetwork label.
const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

fn color(label: usize) -> &'static str {
    PALETTE[label % PALETTE.len()]
}

struct Frame {
    scale: f64,
    ox: f64,
    oy: f64,
}

impl Frame {
    fn for_region(region: &Region) -> Frame {
        let span = CANVAS - 2.0 * MARGIN;
        match *region {
            Region::Square { side } => Frame {
                scale: span / side,
                ox: MARGIN,
                oy: CANVAS - MARGIN,
            },
            Region::Disc { radius } => Frame {
                scale: span / (2.0 * radius),
                ox: CANVAS / 2.0,
                oy: CANVAS / 2.0,
            },
        }
    }

    fn x(&self, x: f64) -> f64 {
        self.ox + self.scale * x
    }

    fn y(&self, y: f64) -> f64 {
        self.oy - self.scale * y
    }
}

fn fmt_coord(v: f64) -> String {
    format!("{:.2}", v)
}

/// Render the partitioned topology as an SVG document.
pub fn render_snapshot(
    topology: &Topology,
    partition: &Partition,
    style: SnapshotStyle,
) -> Result<String> {
    if partition.num_users() != topology.num_users()
        || partition.num_beams() != topology.num_beams()
    {
        return Err(CliError::Runtime(format!(
            "partition covers {} users / {} beams, topology has {} / {}",
            partition.num_users(),
            partition.num_beams(),
            topology.num_users(),
            topology.num_beams()
        )));
    }
    let mut doc = String::new();
    let _ = writeln!(
        doc,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" \
         viewBox=\"0 0 {CANVAS} {CANVAS}\">"
    );
    let _ = writeln!(doc, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    match style {
        SnapshotStyle::CellFree => render_cellfree(&mut doc, topology, partition),
        SnapshotStyle::SingleCell => render_singlecell(&mut doc, topology, partition),
    }
    doc.push_str("</svg>\n");
    Ok(doc)
}

/// Subnetworks with no users: their beams are switched off.
fn off_labels(partition: &Partition) -> Vec<bool> {
    partition
        .subnet_sizes()
        .iter()
        .map(|&(users, _)| users == 0)
        .collect()
}

fn render_cellfree(doc: &mut String, topology: &Topology, partition: &Partition) {
    let frame = Frame::for_region(&topology.region);
    let off = off_labels(partition);
    let owners = topology.beam_owners();

    // APs as triangles; one beam per AP in this style, so the beam label
    // colors its AP marker.
    for (beam, &ap) in owners.iter().enumerate() {
        let label = partition.beam_label(beam);
        let p = topology.ap_positions[ap];
        let (cx, cy) = (frame.x(p[0]), frame.y(p[1]));
        let r = 7.0;
        let points = format!(
            "{},{} {},{} {},{}",
            fmt_coord(cx),
            fmt_coord(cy - r),
            fmt_coord(cx - 0.866 * r),
            fmt_coord(cy + 0.5 * r),
            fmt_coord(cx + 0.866 * r),
            fmt_coord(cy + 0.5 * r)
        );
        let fill = if off[label] { "none" } else { color(label) };
        let _ = writeln!(
            doc,
            "<polygon points=\"{points}\" fill=\"{fill}\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            color(label)
        );
    }
    for (user, p) in topology.user_positions.iter().enumerate() {
        let label = partition.user_label(user);
        let _ = writeln!(
            doc,
            "<circle cx=\"{}\" cy=\"{}\" r=\"4.5\" fill=\"{}\" stroke=\"black\" \
             stroke-width=\"0.6\"/>",
            fmt_coord(frame.x(p[0])),
            fmt_coord(frame.y(p[1])),
            color(label)
        );
    }
}

/// Polyline approximation of the arc from `a1` to `a2` at radius `r`.
fn arc_points(frame: &Frame, center: [f64; 2], r: f64, a1: f64, a2: f64) -> String {
    let steps = 24;
    let mut out = String::new();
    for i in 0..=steps {
        let a = a1 + (a2 - a1) * i as f64 / steps as f64;
        let x = frame.x(center[0] + r * a.cos());
        let y = frame.y(center[1] + r * a.sin());
        let _ = write!(out, " L {} {}", fmt_coord(x), fmt_coord(y));
    }
    out
}

fn render_singlecell(doc: &mut String, topology: &Topology, partition: &Partition) {
    let frame = Frame::for_region(&topology.region);
    let radius = match topology.region {
        Region::Disc { radius } => radius,
        Region::Square { side } => side / 2.0,
    };
    let center = topology.ap_positions[0];
    let n_beams = topology.beams_per_ap[0];
    let off = off_labels(partition);

    let _ = writeln!(
        doc,
        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>",
        fmt_coord(frame.x(center[0])),
        fmt_coord(frame.y(center[1])),
        fmt_coord(frame.scale * radius)
    );

    // One path per beam: the sector pair covering +/- theta for the beam's
    // slice of cosine space. Inactive beams get a dashed outline.
    for beam in 0..n_beams {
        let label = partition.beam_label(beam);
        let c = dft_beam_direction(beam + 1, n_beams);
        let c_lo = (c - 1.0 / n_beams as f64).max(-1.0);
        let c_hi = (c + 1.0 / n_beams as f64).min(1.0);
        let (a1, a2) = (c_hi.acos(), c_lo.acos());
        let (cx, cy) = (frame.x(center[0]), frame.y(center[1]));
        let mut d = String::new();
        for (b1, b2) in [(a1, a2), (-a2, -a1)] {
            let _ = write!(
                d,
                "M {} {}{} Z ",
                fmt_coord(cx),
                fmt_coord(cy),
                arc_points(&frame, center, radius, b1, b2)
            );
        }
        if off[label] {
            let _ = writeln!(
                doc,
                "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" \
                 stroke-dasharray=\"6 4\"/>",
                d.trim_end(),
                color(label)
            );
        } else {
            let _ = writeln!(
                doc,
                "<path d=\"{}\" fill=\"{}\" fill-opacity=\"0.25\" stroke=\"{}\" \
                 stroke-width=\"1.2\"/>",
                d.trim_end(),
                color(label),
                color(label)
            );
        }
    }

    for (user, p) in topology.user_positions.iter().enumerate() {
        let label = partition.user_label(user);
        let _ = writeln!(
            doc,
            "<circle cx=\"{}\" cy=\"{}\" r=\"4.5\" fill=\"{}\" stroke=\"black\" \
             stroke-width=\"0.6\"/>",
            fmt_coord(frame.x(p[0])),
            fmt_coord(frame.y(p[1])),
            color(label)
        );
    }
}
