//! SVG line chart of the mAP columns against the sweep axis.

use std::path::Path;

use plotters::prelude::*;

use super::sweep::{Output, RunRecord};
use crate::error::{Error, Result};

const SERIES: [(Output, RGBColor); 4] = [
    (Output::MapJoint, RGBColor(200, 30, 30)),
    (Output::MapCloudOnly, RGBColor(30, 90, 200)),
    (Output::MapEdgeOnly, RGBColor(30, 150, 60)),
    (Output::MapOracle, RGBColor(120, 120, 120)),
];

type Series = (Output, RGBColor, Vec<(f64, f64)>);

fn plot_err(e: impl std::fmt::Display) -> Error {
    Error::Plot(e.to_string())
}

/// Draws every mAP output selected in `outputs` that has at least one value.
pub fn emit_plot(records: &[RunRecord], outputs: &[Output], path: impl AsRef<Path>) -> Result<()> {
    let first = records
        .first()
        .ok_or_else(|| Error::invalid("no records to plot"))?;
    let series: Vec<Series> = SERIES
        .iter()
        .filter(|(o, _)| outputs.contains(o))
        .map(|&(o, c)| {
            let pts = records
                .iter()
                .filter_map(|r| o.value(r).map(|v| (r.axis_value, v)))
                .collect::<Vec<_>>();
            (o, c, pts)
        })
        .filter(|(_, _, pts)| !pts.is_empty())
        .collect();

    let xs = records.iter().map(|r| r.axis_value);
    let (x_lo, x_hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    });
    let ys = series.iter().flat_map(|s| s.2.iter().map(|p| p.1));
    let (y_lo, y_hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| {
        (lo.min(y), hi.max(y))
    });
    let (x_lo, x_hi) = padded(x_lo, x_hi);
    let (y_lo, y_hi) = if y_lo.is_finite() {
        padded(y_lo, y_hi)
    } else {
        (0.0, 1.0)
    };

    let path = path.as_ref();
    let root = SVGBackend::new(path, (800, 500)).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(format!("mAP vs {}", first.axis), ("sans-serif", 20))
        .margin(15)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x_lo..x_hi, y_lo..y_hi)
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc(first.axis.name())
        .y_desc("mAP")
        .draw()
        .map_err(plot_err)?;
    for (o, color, pts) in series {
        chart
            .draw_series(LineSeries::new(pts.iter().copied(), color.stroke_width(2)))
            .map_err(plot_err)?
            .label(o.name())
            .legend(move |(x, y)| {
                PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2))
            });
        chart
            .draw_series(pts.iter().map(|&p| Circle::new(p, 3, color.filled())))
            .map_err(plot_err)?;
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .position(SeriesLabelPosition::LowerRight)
        .draw()
        .map_err(plot_err)?;
    root.present().map_err(plot_err)?;
    Ok(())
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    if span <= 0.0 {
        let d = lo.abs().max(1.0) * 0.05;
        (lo - d, hi + d)
    } else {
        (lo - 0.05 * span, hi + 0.05 * span)
    }
}
