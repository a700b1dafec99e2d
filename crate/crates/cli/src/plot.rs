use std::path::Path;

use entbound::measures::MeasureRecord;
use plotters::prelude::*;

/// Per-state scatter of `2^gLower`, `rPpt` and `dPpt`; the chain predicts the
/// three markers are stacked bottom to top.
pub fn chain_scatter(path: &Path, rows: &[(String, MeasureRecord)]) -> Result<(), String> {
    let series: [(&str, RGBColor, Vec<(f64, f64)>); 3] = [
        (
            "2^gLower",
            BLUE,
            rows.iter()
                .enumerate()
                .map(|(i, (_, r))| (i as f64, r.g_lower.exp2()))
                .collect(),
        ),
        (
            "rPpt",
            GREEN,
            rows.iter()
                .enumerate()
                .map(|(i, (_, r))| (i as f64, r.r_ppt))
                .collect(),
        ),
        (
            "dPpt",
            RED,
            rows.iter()
                .enumerate()
                .map(|(i, (_, r))| (i as f64, r.d_ppt))
                .collect(),
        ),
    ];
    let y_max = series
        .iter()
        .flat_map(|(_, _, pts)| pts.iter().map(|p| p.1))
        .filter(|y| y.is_finite())
        .fold(1.0f64, f64::max)
        * 1.05;
    let x_max = rows.len().max(1) as f64;

    let err = |e: &dyn std::fmt::Display| format!("{}: {e}", path.display());
    let root = SVGBackend::new(path, (800, 500)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| err(&e))?;
    let mut chart = ChartBuilder::on(&root)
        .margin(20)
        .build_cartesian_2d(-0.5..x_max - 0.5, 0.0..y_max)
        .map_err(|e| err(&e))?;
    chart
        .configure_mesh()
        .disable_x_mesh()
        .disable_y_mesh()
        .x_labels(0)
        .y_labels(0)
        .draw()
        .map_err(|e| err(&e))?;
    for (_, color, pts) in series {
        chart
            .draw_series(pts.into_iter().map(|p| Circle::new(p, 3, color.filled())))
            .map_err(|e| err(&e))?;
    }
    root.present().map_err(|e| err(&e))?;
    Ok(())
}
