//! Canonical demonstration configurations ("figure presets").
//!
//! Each preset names a boundary condition, the solitons sent towards the
//! boundary, and a grid that frames the reflection.

use crate::boundary::BoundaryCondition;
use crate::grid::Grid;
use crate::lax::SolitonParameters;

/// A named ready-to-run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub name: &'static str,
    pub boundary: BoundaryCondition,
    pub solitons: Vec<SolitonParameters>,
    pub grid: Grid,
}

pub const PRESET_NAMES: [&str; 4] = ["fig-dir2", "fig-new2", "fig-new4", "fig-new6"];

/// Look up a preset by name.
pub fn figure_preset(name: &str) -> Option<FigurePreset> {
    let soliton = |xi, eta, x1, phi1| SolitonParameters::new(xi, eta, x1, phi1).expect("preset");
    let grid = |t_max, x_max, n| Grid::new(0.0, t_max, n, 0.0, x_max, n).expect("preset");
    match name {
        // one soliton reflecting off a Dirichlet boundary
        "fig-dir2" => Some(FigurePreset {
            name: "fig-dir2",
            boundary: BoundaryCondition::Dirichlet,
            solitons: vec![soliton(1.0, 1.0, 5.0, 0.0)],
            grid: grid(5.0, 15.0, 50),
        }),
        // one soliton reflecting off the two-parameter boundary
        "fig-new2" => Some(FigurePreset {
            name: "fig-new2",
            boundary: BoundaryCondition::New { alpha: 1.0, beta: 2.0 },
            solitons: vec![soliton(1.0, 1.0, 5.0, 0.0)],
            grid: grid(5.0, 15.0, 50),
        }),
        // two equal-velocity solitons (a breather) hitting the boundary
        "fig-new4" => Some(FigurePreset {
            name: "fig-new4",
            boundary: BoundaryCondition::New { alpha: 1.0, beta: 2.0 },
            solitons: vec![soliton(0.5, 0.5, 5.0, 0.0), soliton(0.5, 1.5, 5.0, 0.0)],
            grid: grid(6.0, 15.0, 40),
        }),
        // three solitons with distinct speeds
        "fig-new6" => Some(FigurePreset {
            name: "fig-new6",
            boundary: BoundaryCondition::New { alpha: 1.0, beta: 2.0 },
            solitons: vec![
                soliton(1.5, 1.0, 5.0, 0.0),
                soliton(0.5, 0.75, 8.0, 0.0),
                soliton(1.25, 0.5, 11.0, 0.0),
            ],
            grid: grid(6.0, 20.0, 40),
        }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_resolve_and_validate() {
        for name in PRESET_NAMES {
            let p = figure_preset(name).unwrap();
            assert!(p.boundary.validate().is_ok());
            assert!(!p.solitons.is_empty());
            for s in &p.solitons {
                assert!(p.boundary.check_admissible(s.lambda()).is_ok());
            }
        }
        assert!(figure_preset("fig-unknown").is_none());
    }
}
