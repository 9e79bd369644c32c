//! Standalone SVG plots of the run artifacts.
//!
//! Reads the CSV files a run wrote and renders two fixed-size documents:
//! `balance.svg` overlays the inflow and content curves (distinct stroke
//! widths so coincident curves stay tellable apart), `profiles.svg` stacks a
//! concentration panel over a coverage panel with one line per dumped
//! fraction.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2",
];

/// Renders `balance.svg` and `profiles.svg` from the artifacts in `dir`.
/// Fails with a missing-artifact error if the run has not been executed.
pub fn render_svg(dir: &Path) -> Result<Vec<PathBuf>> {
    let balance_csv = dir.join("balance.csv");
    if !balance_csv.is_file() {
        return Err(Error::MissingArtifact(balance_csv));
    }
    let rows = read_csv(&balance_csv, 4)?;
    let tau: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let m1: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let m2: Vec<f64> = rows.iter().map(|r| r[2]).collect();

    let profile_dir = dir.join("profiles");
    let mut profiles = Vec::new();
    if profile_dir.is_dir() {
        let mut entries: Vec<PathBuf> = fs::read_dir(&profile_dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension().is_some_and(|x| x == "csv")
                    && p.file_name()
                        .is_some_and(|f| f.to_string_lossy().starts_with("profile_"))
            })
            .collect();
        entries.sort();
        for path in entries {
            let label = path
                .file_stem()
                .unwrap()
                .to_string_lossy()
                .trim_start_matches("profile_")
                .to_string();
            profiles.push((label, read_csv(&path, 3)?));
        }
    }
    if profiles.is_empty() {
        return Err(Error::MissingArtifact(profile_dir));
    }

    let balance_svg = dir.join("balance.svg");
    fs::write(&balance_svg, render_balance(&tau, &m1, &m2))?;
    let profiles_svg = dir.join("profiles.svg");
    fs::write(&profiles_svg, render_profiles(&profiles))?;
    Ok(vec![balance_svg, profiles_svg])
}

fn read_csv(path: &Path, columns: usize) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for line in text.lines().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .take(columns)
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Internal(format!("unreadable row in {}", path.display())))?;
        rows.push(row);
    }
    Ok(rows)
}

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Frame {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let px = self.x0 + (x - self.xmin) / (self.xmax - self.xmin) * self.w;
        let py = self.y0 + self.h - (y - self.ymin) / (self.ymax - self.ymin) * self.h;
        (px, py)
    }

    fn polyline(&self, xs: &[f64], ys: &[f64], stroke: &str, width: f64) -> String {
        let points: Vec<String> = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| {
                let (px, py) = self.map(x, y);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        format!(
            "<polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\" points=\"{}\"/>\n",
            points.join(" ")
        )
    }

    /// Axis lines, five ticks per axis with labels, and axis titles.
    fn axes(&self, xlabel: &str, ylabel: &str) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
             fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n",
            self.x0, self.y0, self.w, self.h
        ));
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let xv = self.xmin + t * (self.xmax - self.xmin);
            let yv = self.ymin + t * (self.ymax - self.ymin);
            let (px, _) = self.map(xv, self.ymin);
            let (_, py) = self.map(self.xmin, yv);
            let bottom = self.y0 + self.h;
            s.push_str(&format!(
                "<line x1=\"{px:.2}\" y1=\"{bottom:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#333\"/>\n",
                bottom + 5.0
            ));
            s.push_str(&format!(
                "<text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\" \
                 font-family=\"sans-serif\">{}</text>\n",
                bottom + 18.0,
                tick_label(xv)
            ));
            s.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#333\"/>\n",
                self.x0 - 5.0,
                self.x0
            ));
            s.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\" \
                 font-family=\"sans-serif\">{}</text>\n",
                self.x0 - 8.0,
                py + 4.0,
                tick_label(yv)
            ));
        }
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" \
             font-family=\"sans-serif\">{xlabel}</text>\n",
            self.x0 + self.w / 2.0,
            self.y0 + self.h + 38.0
        ));
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" transform=\"rotate(-90 {:.2} {:.2})\">{ylabel}</text>\n",
            self.x0 - 48.0,
            self.y0 + self.h / 2.0,
            self.x0 - 48.0,
            self.y0 + self.h / 2.0
        ));
        s
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (0.01..10000.0).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn document(body: &str, title: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.0}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\" \
         font-family=\"sans-serif\">{title}</text>\n{body}</svg>\n",
        WIDTH / 2.0
    )
}

fn render_balance(tau: &[f64], m1: &[f64], m2: &[f64]) -> String {
    let (xmin, xmax) = span(tau.iter().copied());
    let (ymin, ymax) = span(m1.iter().chain(m2).copied());
    let frame = Frame {
        x0: 70.0,
        y0: 50.0,
        w: WIDTH - 95.0,
        h: HEIGHT - 120.0,
        xmin,
        xmax,
        ymin: ymin.min(0.0),
        ymax,
    };
    let mut body = frame.axes("tau", "solute amount");
    body.push_str(&frame.polyline(tau, m1, "#000000", 3.0));
    body.push_str(&frame.polyline(tau, m2, "#e6c700", 1.2));
    body.push_str(
        "<text x=\"90\" y=\"66\" font-size=\"13\" font-family=\"sans-serif\">\
         <tspan fill=\"#000000\">inflow m1 (thick)</tspan> \
         <tspan fill=\"#a08a00\">content m2 (thin)</tspan></text>\n",
    );
    document(&body, "solute inflow vs content")
}

type Profile = (String, Vec<Vec<f64>>);

fn render_profiles(profiles: &[Profile]) -> String {
    let (xmin, xmax) = span(
        profiles
            .iter()
            .flat_map(|(_, rows)| rows.iter().map(|r| r[0])),
    );
    let panel = |y0: f64, col: usize, ylabel: &str| -> String {
        let (ymin, ymax) = span(
            profiles
                .iter()
                .flat_map(|(_, rows)| rows.iter().map(|r| r[col])),
        );
        let frame = Frame {
            x0: 70.0,
            y0,
            w: WIDTH - 95.0,
            h: 200.0,
            xmin,
            xmax,
            ymin: ymin.min(0.0),
            ymax,
        };
        let mut s = frame.axes("rho (midpoints)", ylabel);
        for (idx, (label, rows)) in profiles.iter().enumerate() {
            let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
            let ys: Vec<f64> = rows.iter().map(|r| r[col]).collect();
            let color = PALETTE[idx % PALETTE.len()];
            s.push_str(&frame.polyline(&xs, &ys, color, 1.5));
            s.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"{color}\" \
                 font-family=\"sans-serif\">front at {label}</text>\n",
                frame.x0 + frame.w - 110.0,
                y0 + 16.0 + 14.0 * idx as f64
            ));
        }
        s
    };
    let mut body = panel(45.0, 1, "u");
    body.push_str(&panel(330.0, 2, "theta"));
    document(&body, "radial profiles while filling")
}
