//! Experiment driver: turns a validated [`RunConfig`] into files plus a summary.

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Experiment, Format, RunConfig};
use crate::dyndiff::{fan_profile_with, gamma_samples, rocking_curve, LaueCrystal, Profile1D};
use crate::error::{Result, SimError, Warning};
use crate::field::{Grid, ScalarField2D, Unit};
use crate::geometry::{
    seam_band, stack_thickness, thickness_map_direct, thickness_map_radon, PhaseFlag, RadonConfig,
    SpiralPhasePlate,
};
use crate::interferogram::{
    apply_noise, bin_to_detector, coherent_interferogram, complementary_interferogram,
    ideal_interferogram, DetectorSpec,
};
use crate::io::{write_csv, write_pgm, write_table_csv};
use crate::material::{
    disk_averaged_deflection, effective_momentum, lambda_thickness, prism_deflection,
};
use crate::oam::{
    count_azimuthal_maxima_with, superposition_intensity, MaximaCounter, OamSuperposition,
};
use crate::winding::{phase_stepped_frames, winding_around, Winding};

pub const SUMMARY_FILE: &str = "summary.json";

const WINDING_SAMPLES: usize = 720;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindingSummary {
    pub label: String,
    pub number: i64,
    pub total: f64,
    pub fractional: f64,
    pub discontinuities: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeflectionSummary {
    pub at_rim: f64,
    pub disk_average: f64,
    pub inner_cutoff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub experiment: Experiment,
    pub d_lambda: f64,
    pub effective_l: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_intensity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_intensity: Option<f64>,
    /// Largest `|I_G + I_O - 1|` over all pre-noise images of the run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conservation_max_error: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub maxima_counts: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub windings: Vec<WindingSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub delta_d: Vec<f64>,
    /// Radon vs direct thickness RMS, seam band excluded, relative to |h_s|.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub radon_rms_rel: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deflection: Option<DeflectionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coherence_max_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fan_integral: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rocking_integral: Option<f64>,
    pub warnings: Vec<String>,
    /// File names relative to the output directory, in write order.
    pub artifacts: Vec<String>,
}

impl RunSummary {
    fn new(experiment: Experiment, d_lambda: f64) -> Self {
        Self {
            experiment,
            d_lambda,
            effective_l: Vec::new(),
            min_intensity: None,
            max_intensity: None,
            conservation_max_error: None,
            maxima_counts: Vec::new(),
            windings: Vec::new(),
            delta_d: Vec::new(),
            radon_rms_rel: Vec::new(),
            deflection: None,
            coherence_max_deviation: None,
            fan_integral: None,
            rocking_integral: None,
            warnings: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    fn track_range(&mut self, f: &ScalarField2D) {
        let lo = self.min_intensity.map_or(f.min(), |m| m.min(f.min()));
        let hi = self.max_intensity.map_or(f.max(), |m| m.max(f.max()));
        self.min_intensity = Some(lo);
        self.max_intensity = Some(hi);
    }

    fn track_conservation(&mut self, g: &ScalarField2D, o: &ScalarField2D) {
        let err = g
            .values()
            .iter()
            .zip(o.values())
            .map(|(a, b)| (a + b - 1.0).abs())
            .fold(0.0, f64::max);
        self.conservation_max_error = Some(self.conservation_max_error.unwrap_or(0.0).max(err));
    }

    fn warn(&mut self, ws: &[Warning]) {
        for w in ws {
            let s = w.to_string();
            if !self.warnings.contains(&s) {
                self.warnings.push(s);
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub dir: PathBuf,
    pub artifacts: Vec<PathBuf>,
    pub summary: RunSummary,
}

/// Validate the configuration, run the experiment and write its outputs.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let dir = config.resolved_output_dir();
    fs::create_dir_all(&dir).map_err(|e| SimError::io(&dir, e))?;
    let mut out = Sink {
        dir: &dir,
        formats: &config.formats,
        files: Vec::new(),
    };
    let mut summary = Context::new(config)?.execute(&mut out)?;
    summary.artifacts = out.names();
    summary.artifacts.push(SUMMARY_FILE.into());

    let summary_path = dir.join(SUMMARY_FILE);
    let json = serde_json::to_string_pretty(&summary).expect("summary serialises") + "\n";
    fs::write(&summary_path, json).map_err(|e| SimError::io(&summary_path, e))?;
    out.files.push(summary_path);

    Ok(RunOutput {
        artifacts: out.files,
        dir,
        summary,
    })
}

struct Sink<'a> {
    dir: &'a Path,
    formats: &'a [Format],
    files: Vec<PathBuf>,
}

impl Sink<'_> {
    fn field(&mut self, stem: &str, f: &ScalarField2D) -> Result<()> {
        for fmt in self.formats {
            let path = match fmt {
                Format::Pgm => {
                    let p = self.dir.join(format!("{stem}.pgm"));
                    write_pgm(f, &p)?;
                    p
                }
                Format::Csv => {
                    let p = self.dir.join(format!("{stem}.csv"));
                    write_csv(f, &p)?;
                    p
                }
            };
            self.files.push(path);
        }
        Ok(())
    }

    fn table(&mut self, stem: &str, columns: &[&str], rows: &[Vec<f64>]) -> Result<()> {
        let p = self.dir.join(format!("{stem}.csv"));
        write_table_csv(&p, columns, rows)?;
        self.files.push(p);
        Ok(())
    }

    fn names(&self) -> Vec<String> {
        self.files
            .iter()
            .map(|p| {
                p.file_name()
                    .unwrap_or_default()
                    .to_string_lossy()
                    .into_owned()
            })
            .collect()
    }
}

struct Context<'a> {
    cfg: &'a RunConfig,
    d_lambda: f64,
    plates: Vec<SpiralPhasePlate>,
    grid: Grid,
    det: DetectorSpec,
}

impl<'a> Context<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self> {
        let material = cfg.material().expect("validated material");
        let d_lambda = lambda_thickness(&material, &cfg.beam()?)?;
        let plates: Vec<_> = cfg.plates.iter().map(|p| p.build(d_lambda)).collect();
        for p in &plates {
            p.validate()?;
        }
        Ok(Self {
            cfg,
            d_lambda,
            plates,
            grid: Grid::square(cfg.grid.n, cfg.grid.extent)?,
            det: cfg.detector_spec(),
        })
    }

    fn execute(&self, out: &mut Sink) -> Result<RunSummary> {
        let mut s = RunSummary::new(self.cfg.experiment, self.d_lambda);
        for p in &self.plates {
            s.effective_l
                .push(effective_momentum(p.step_height, self.d_lambda)?);
        }
        match self.cfg.experiment {
            Experiment::SppMap => self.spp_map(&mut s, out)?,
            Experiment::Interferogram => self.interferogram(&mut s, out)?,
            Experiment::Stack => self.stack(&mut s, out)?,
            Experiment::FlagSeries => self.flag_series(&mut s, out)?,
            Experiment::Coherence => self.coherence(&mut s, out)?,
            Experiment::Borrmann => self.borrmann(&mut s, out)?,
            Experiment::OamRing => self.oam_ring(&mut s, out)?,
            Experiment::Deflection => self.deflection(&mut s)?,
        }
        Ok(s)
    }

    fn thickness(&self, plates: &[SpiralPhasePlate]) -> Result<ScalarField2D> {
        let maps = plates
            .iter()
            .map(|p| thickness_map_direct(p, &self.grid))
            .collect::<Result<Vec<_>>>()?;
        stack_thickness(&maps)
    }

    /// Detector image `k` of the run; each image draws from its own noise seed.
    fn detector_image(&self, fine: &ScalarField2D, k: u64) -> Result<ScalarField2D> {
        let mut det = self.det;
        det.seed = det.seed.wrapping_add(k);
        apply_noise(&bin_to_detector(fine, &det)?, &det)
    }

    /// G and O images of one thickness map at one global phase.
    fn pair(
        &self,
        s: &mut RunSummary,
        out: &mut Sink,
        stem: &str,
        thickness: &ScalarField2D,
        phi0: f64,
        k: u64,
    ) -> Result<()> {
        let g = ideal_interferogram(thickness, self.d_lambda, phi0)?;
        let o = complementary_interferogram(&g)?;
        s.track_conservation(&g, &o);
        let gd = bin_to_detector(&g, &self.det)?;
        let od = bin_to_detector(&o, &self.det)?;
        s.track_conservation(&gd, &od);
        s.track_range(&gd);
        out.field(&format!("{stem}_g"), &self.detector_image(&g, 2 * k)?)?;
        out.field(&format!("{stem}_o"), &self.detector_image(&o, 2 * k + 1)?)?;
        Ok(())
    }

    fn winding(
        &self,
        label: &str,
        thickness: &ScalarField2D,
        center: &SpiralPhasePlate,
    ) -> Result<WindingSummary> {
        let frames = phase_stepped_frames(thickness, self.d_lambda, self.cfg.phi0)?;
        let w: Winding = winding_around(
            &frames,
            (center.center_x, center.center_z),
            0.5 * center.radius(),
            WINDING_SAMPLES,
        )?;
        Ok(WindingSummary {
            label: label.into(),
            number: w.number,
            total: w.total,
            fractional: w.fractional,
            discontinuities: w.discontinuities.len(),
        })
    }

    fn spp_map(&self, s: &mut RunSummary, out: &mut Sink) -> Result<()> {
        let radon = RadonConfig::new(self.cfg.radon_sampling.unwrap_or(self.grid.nx));
        for (i, p) in self.plates.iter().enumerate() {
            let direct = thickness_map_direct(p, &self.grid)?;
            let projected = thickness_map_radon(p, &radon, &self.grid)?;
            s.warn(&projected.warnings);
            let band = seam_band(p, &self.grid, 2.0);
            let (mut acc, mut n) = (0.0, 0usize);
            for ((a, b), skip) in direct
                .values()
                .iter()
                .zip(projected.value.values())
                .zip(&band)
            {
                if !skip {
                    acc += (a - b).powi(2);
                    n += 1;
                }
            }
            let rms = (acc / n.max(1) as f64).sqrt();
            s.radon_rms_rel.push(if p.step_height != 0.0 {
                rms / p.step_height.abs()
            } else {
                rms
            });
            let scale = 1.0 / self.d_lambda;
            out.field(
                &format!("spp{i}_direct"),
                &direct.scaled(scale).relabel(Unit::Dimensionless)?,
            )?;
            out.field(
                &format!("spp{i}_radon"),
                &projected.value.scaled(scale).relabel(Unit::Dimensionless)?,
            )?;
        }
        Ok(())
    }

    fn interferogram(&self, s: &mut RunSummary, out: &mut Sink) -> Result<()> {
        let t = self.thickness(&self.plates)?;
        self.pair(s, out, "interferogram", &t, self.cfg.phi0, 0)?;
        s.windings
            .push(self.winding("combined", &t, &self.plates[0])?);
        Ok(())
    }

    fn stack(&self, s: &mut RunSummary, out: &mut Sink) -> Result<()> {
        let singles = self
            .plates
            .iter()
            .map(|p| thickness_map_direct(p, &self.grid))
            .collect::<Result<Vec<_>>>()?;
        for (i, t) in singles.iter().enumerate() {
            self.pair(
                s,
                out,
                &format!("stack_plate{i}"),
                t,
                self.cfg.phi0,
                i as u64,
            )?;
            s.windings
                .push(self.winding(&format!("plate{i}"), t, &self.plates[i])?);
        }
        let combined = stack_thickness(&singles)?;
        self.pair(
            s,
            out,
            "stack_combined",
            &combined,
            self.cfg.phi0,
            singles.len() as u64,
        )?;
        s.windings
            .push(self.winding("combined", &combined, &self.plates[0])?);
        Ok(())
    }

    fn flag_series(&self, s: &mut RunSummary, out: &mut Sink) -> Result<()> {
        let t = self.thickness(&self.plates)?;
        let flag = &self.cfg.flag;
        let deltas = self
            .cfg
            .phi0_list
            .iter()
            .map(|&rotation| {
                PhaseFlag {
                    slab_thickness: flag.slab_thickness,
                    rotation,
                    bragg_angle: flag.bragg_angle,
                }
                .delta_thickness()
            })
            .collect::<Result<Vec<f64>>>()?;

        // evaluate the series in parallel, then write in order
        let images = deltas
            .par_iter()
            .enumerate()
            .map(|(k, &dd)| {
                let phase = self.cfg.phi0 + TAU * dd / self.d_lambda;
                let g = ideal_interferogram(&t, self.d_lambda, phase)?;
                let o = complementary_interferogram(&g)?;
                let noisy = self.detector_image(&g, k as u64)?;
                let binned = bin_to_detector(&g, &self.det)?;
                Ok((g, o, binned, noisy))
            })
            .collect::<Result<Vec<_>>>()?;
        for (k, (g, o, binned, noisy)) in images.iter().enumerate() {
            s.track_conservation(g, o);
            s.track_range(binned);
            out.field(&format!("flag{k:02}_g"), noisy)?;
        }
        let rows: Vec<Vec<f64>> = self
            .cfg
            .phi0_list
            .iter()
            .zip(&deltas)
            .map(|(&r, &dd)| vec![r, dd, dd / self.d_lambda])
            .collect();
        out.table(
            "flag_delta_d",
            &["rotation_rad", "delta_d_m", "delta_d_over_d_lambda"],
            &rows,
        )?;
        s.delta_d = deltas;
        Ok(())
    }

    fn coherence(&self, s: &mut RunSummary, out: &mut Sink) -> Result<()> {
        let t = self.thickness(&self.plates)?;
        let ideal = ideal_interferogram(&t, self.d_lambda, self.cfg.phi0)?;
        let coh = coherent_interferogram(&t, self.d_lambda, self.cfg.phi0, &self.cfg.coherence)?;
        s.warn(&coh.warnings);
        let o = complementary_interferogram(&coh.value)?;
        s.track_conservation(&coh.value, &o);
        s.coherence_max_deviation = Some(coh.value.max_abs_diff(&ideal)?);
        let binned = bin_to_detector(&coh.value, &self.det)?;
        s.track_range(&binned);
        out.field("coherence_g", &self.detector_image(&coh.value, 0)?)?;
        Ok(())
    }

    fn borrmann(&self, s: &mut RunSummary, out: &mut Sink) -> Result<()> {
        let c = &self.cfg.crystal;
        let crystal = LaueCrystal::new(c.bragg_angle, c.reduced_thickness)?;
        let fan = fan_profile_with(&crystal, &gamma_samples(c.gamma_samples), &c.quadrature)?;
        let ys: Vec<f64> = (0..c.y_samples)
            .map(|k| -c.y_range + 2.0 * c.y_range * k as f64 / (c.y_samples - 1) as f64)
            .collect();
        let curve: Vec<(f64, f64)> = ys.iter().map(|&y| rocking_curve(&crystal, y)).collect();
        let err = curve
            .iter()
            .map(|(g, o)| (g + o - 1.0).abs())
            .fold(0.0, f64::max);
        s.conservation_max_error = Some(err);
        s.fan_integral = Some(fan.integral());
        s.rocking_integral = Some(
            Profile1D {
                coords: ys.clone(),
                values: curve.iter().map(|c| c.0).collect(),
            }
            .integral(),
        );
        let fan_rows: Vec<Vec<f64>> = fan
            .coords
            .iter()
            .zip(&fan.values)
            .map(|(&g, &v)| vec![g, v])
            .collect();
        out.table("borrmann_fan", &["gamma", "intensity"], &fan_rows)?;
        let rc_rows: Vec<Vec<f64>> = ys
            .iter()
            .zip(&curve)
            .map(|(&y, &(g, o))| vec![y, g, o])
            .collect();
        out.table("rocking_curve", &["y", "i_g", "i_o"], &rc_rows)?;
        Ok(())
    }

    fn oam_ring(&self, s: &mut RunSummary, out: &mut Sink) -> Result<()> {
        let o = &self.cfg.oam;
        let sup = OamSuperposition {
            l: o.l,
            ring_radius: o.ring_radius,
            ring_width: o.ring_width,
            relative_phase: o.relative_phase,
        };
        let ring = superposition_intensity(&sup, &self.grid)?;
        let counter = MaximaCounter {
            samples: (16 * o.l as usize).max(720),
            ..Default::default()
        };
        s.maxima_counts
            .push(count_azimuthal_maxima_with(&ring, o.ring_radius, &counter));
        s.track_range(&ring);
        out.field("oam_ring", &ring)?;
        Ok(())
    }

    fn deflection(&self, s: &mut RunSummary) -> Result<()> {
        let material = self.cfg.material().expect("validated material");
        let beam = self.cfg.beam()?;
        let p = &self.plates[0];
        s.deflection = Some(DeflectionSummary {
            at_rim: prism_deflection(p, &material, &beam, p.radius())?,
            disk_average: disk_averaged_deflection(
                p,
                &material,
                &beam,
                self.cfg.deflection_cutoff,
            )?,
            inner_cutoff: self.cfg.deflection_cutoff,
        });
        Ok(())
    }
}
