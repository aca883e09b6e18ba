//! Trace rendering. Both targets are pure functions of the cell geometry and
//! a finished trace; depths are rebuilt by replaying the step records.

use snowblower_core::shapes::Geometry;
use snowblower_core::{Pixel, Trace};
use std::collections::HashMap;
use std::fmt::Write as _;

const CELL: i32 = 24;
const MARGIN: i32 = 12;

struct Board {
    min_x: i32,
    max_x: i32,
    min_y: i32,
    max_y: i32,
    depth: HashMap<Pixel, u32>,
}

impl Board {
    fn new(geometry: &Geometry) -> Self {
        let xs = geometry
            .pixels
            .iter()
            .map(|p| p.x)
            .chain([geometry.eject_to.x]);
        let ys = geometry
            .pixels
            .iter()
            .map(|p| p.y)
            .chain([geometry.eject_to.y]);
        let depth = geometry
            .pixels
            .iter()
            .map(|&p| (p, u32::from(p != geometry.root)))
            .collect();
        Board {
            min_x: xs.clone().min().unwrap_or(0),
            max_x: xs.max().unwrap_or(0),
            min_y: ys.clone().min().unwrap_or(0),
            max_y: ys.max().unwrap_or(0),
            depth,
        }
    }

    fn frame(&self, machine: Pixel, eject_to: Pixel) -> String {
        let mut out = String::new();
        for y in (self.min_y..=self.max_y).rev() {
            let row: String = (self.min_x..=self.max_x)
                .map(|x| {
                    let p = Pixel::new(x, y);
                    if p == machine {
                        '@'
                    } else if p == eject_to {
                        '<'
                    } else {
                        match self.depth.get(&p) {
                            None => ' ',
                            Some(0) => '.',
                            Some(&d) => char::from_digit(d, 10).unwrap_or('#'),
                        }
                    }
                })
                .collect();
            out.push_str(row.trim_end());
            out.push('\n');
        }
        out
    }
}

/// Initial board followed by one frame per step. `@` is the machine, `<`
/// the ejection cell, `.` a clear pixel and `#` a depth above 9.
pub fn ascii(geometry: &Geometry, trace: &Trace) -> String {
    let mut board = Board::new(geometry);
    let mut out = String::new();
    let _ = writeln!(out, "initial");
    out.push_str(&board.frame(geometry.root, geometry.eject_to));
    for r in &trace.records {
        board.depth.insert(r.position, 0);
        if let Some(to) = r.throw_to {
            if let Some(d) = board.depth.get_mut(&to) {
                *d += r.moved;
            }
        }
        let label = trace.summary.segments[r.segment].label;
        let throw = match r.throw_to {
            Some(t) => format!(" > {t}"),
            None => String::new(),
        };
        let _ = writeln!(out, "step {} [{label}] {}{throw}", r.index + 1, r.position);
        out.push_str(&board.frame(r.position, geometry.eject_to));
    }
    let _ = writeln!(out, "frames {}", trace.records.len());
    out
}

/// Cell outlines, the machine path as a polyline through pixel centres and a
/// marker on the ejection cell.
pub fn svg(geometry: &Geometry, trace: &Trace) -> String {
    let board = Board::new(geometry);
    let width = (board.max_x - board.min_x + 1) * CELL + 2 * MARGIN;
    let height = (board.max_y - board.min_y + 1) * CELL + 2 * MARGIN;
    let corner = |p: Pixel| {
        (
            (p.x - board.min_x) * CELL + MARGIN,
            (board.max_y - p.y) * CELL + MARGIN,
        )
    };
    let centre = |p: Pixel| {
        let (x, y) = corner(p);
        (x + CELL / 2, y + CELL / 2)
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, "<title>{} steps</title>", trace.records.len());
    let _ = writeln!(out, r#"<g class="cells" fill="none" stroke="black">"#);
    for &p in &geometry.pixels {
        let (x, y) = corner(p);
        let class = if p == geometry.root {
            "cell root"
        } else {
            "cell"
        };
        let _ = writeln!(
            out,
            r#"<rect class="{class}" x="{x}" y="{y}" width="{CELL}" height="{CELL}"/>"#
        );
    }
    let _ = writeln!(out, "</g>");

    let (ex, ey) = centre(geometry.eject_to);
    let r = CELL / 3;
    let _ = writeln!(
        out,
        r#"<polygon class="eject" points="{},{} {},{} {},{}" fill="grey"/>"#,
        ex + r,
        ey - r,
        ex + r,
        ey + r,
        ex - r,
        ey
    );

    let points: Vec<String> = std::iter::once(geometry.root)
        .chain(trace.records.iter().map(|r| r.position))
        .map(|p| {
            let (x, y) = centre(p);
            format!("{x},{y}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline class="path" points="{}" fill="none" stroke="red" stroke-width="2"/>"#,
        points.join(" ")
    );
    out.push_str("</svg>\n");
    out
}
