//! Sampled parameter lattices with cached jets and form components.
//!
//! Periodic axes cover `[start, end)` without duplicating the seam;
//! non-periodic axes include both endpoints. The validity mask marks
//! samples outside the parabolic exclusion zone; stencil passes
//! downstream shrink it further near non-periodic edges.

use super::forms::{fundamental_forms, FormComponents};
use super::surface::{SurfaceError, SurfaceJet, SurfaceSpec};
use crate::par::{map_indexed, EvalMode};
use std::io::{self, Write};

#[derive(Clone, Copy, Debug)]
pub struct GridAxis {
    pub n: usize,
    pub start: f64,
    pub end: f64,
    pub periodic: bool,
}

impl GridAxis {
    pub fn step(&self) -> f64 {
        if self.periodic {
            (self.end - self.start) / self.n as f64
        } else {
            (self.end - self.start) / (self.n - 1) as f64
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step()
    }
}

#[derive(Clone, Debug)]
pub struct SurfaceGrid {
    pub spec: SurfaceSpec,
    pub axis_u: GridAxis,
    pub axis_v: GridAxis,
    /// Row-major over (iu, iv): index = iu * axis_v.n + iv.
    pub jets: Vec<SurfaceJet>,
    pub forms: Vec<FormComponents>,
    /// Outside the exclusion zone and usable for operator evaluation.
    pub valid: Vec<bool>,
    pub exclusion: f64,
}

impl SurfaceGrid {
    /// Samples the surface on its default domain.
    pub fn build(
        spec: &SurfaceSpec,
        nu: usize,
        nv: usize,
        exclusion: f64,
        mode: EvalMode,
    ) -> Result<Self, SurfaceError> {
        let (du, pu, dv, pv) = spec.default_domain();
        let axis_u = GridAxis {
            n: nu,
            start: du.0,
            end: du.1,
            periodic: pu,
        };
        let axis_v = GridAxis {
            n: nv,
            start: dv.0,
            end: dv.1,
            periodic: pv,
        };
        Self::build_on(spec, axis_u, axis_v, exclusion, mode)
    }

    pub fn build_on(
        spec: &SurfaceSpec,
        axis_u: GridAxis,
        axis_v: GridAxis,
        exclusion: f64,
        mode: EvalMode,
    ) -> Result<Self, SurfaceError> {
        let total = axis_u.n * axis_v.n;
        let samples: Vec<Result<(SurfaceJet, FormComponents, bool), SurfaceError>> =
            map_indexed(mode, total, |idx| {
                let iu = idx / axis_v.n;
                let iv = idx % axis_v.n;
                let u = axis_u.value(iu);
                let v = axis_v.value(iv);
                let jet = spec.jet(u, v)?;
                let forms = fundamental_forms(&jet, u, v)?;
                let valid = spec.exclusion_field(u, v) >= exclusion;
                Ok((jet, forms, valid))
            });
        let mut jets = Vec::with_capacity(total);
        let mut forms = Vec::with_capacity(total);
        let mut valid = Vec::with_capacity(total);
        for s in samples {
            let (j, f, m) = s?;
            jets.push(j);
            forms.push(f);
            valid.push(m);
        }
        Ok(SurfaceGrid {
            spec: spec.clone(),
            axis_u,
            axis_v,
            jets,
            forms,
            valid,
            exclusion,
        })
    }

    pub fn len(&self) -> usize {
        self.jets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jets.is_empty()
    }

    pub fn idx(&self, iu: usize, iv: usize) -> usize {
        iu * self.axis_v.n + iv
    }

    pub fn uv(&self, idx: usize) -> (f64, f64) {
        let iu = idx / self.axis_v.n;
        let iv = idx % self.axis_v.n;
        (self.axis_u.value(iu), self.axis_v.value(iv))
    }

    /// Samples a scalar function of (u, v, jet) over the whole lattice.
    pub fn scalar_field<F>(&self, mode: EvalMode, f: F) -> Vec<f64>
    where
        F: Fn(f64, f64, &SurfaceJet) -> f64 + Sync + Send,
    {
        map_indexed(mode, self.len(), |idx| {
            let (u, v) = self.uv(idx);
            f(u, v, &self.jets[idx])
        })
    }

    /// One position coordinate as a field.
    pub fn position_component(&self, k: usize) -> Vec<f64> {
        self.jets.iter().map(|j| j.x[k]).collect()
    }

    /// One Gauss-map coordinate as a field.
    pub fn normal_component(&self, k: usize) -> Vec<f64> {
        self.jets.iter().map(|j| j.normal[k]).collect()
    }

    pub fn count_valid(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// Fixed-column export:
    /// `u,v,x,y,z,E,F,G,L,M,N,e,f,g,K,H`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "u,v,x,y,z,E,F,G,L,M,N,e,f,g,K,H")?;
        for idx in 0..self.len() {
            let (u, v) = self.uv(idx);
            let j = &self.jets[idx];
            let f = &self.forms[idx];
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                u,
                v,
                j.x[0],
                j.x[1],
                j.x[2],
                f.i[0],
                f.i[1],
                f.i[2],
                f.ii[0],
                f.ii[1],
                f.ii[2],
                f.iii[0],
                f.iii[1],
                f.iii[2],
                f.gauss,
                f.mean
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curve::CurveSpec;

    #[test]
    fn periodic_axis_skips_the_seam() {
        let axis = GridAxis {
            n: 8,
            start: 0.0,
            end: 8.0,
            periodic: true,
        };
        assert_eq!(axis.step(), 1.0);
        assert_eq!(axis.value(7), 7.0);
        let axis = GridAxis {
            n: 9,
            start: 0.0,
            end: 8.0,
            periodic: false,
        };
        assert_eq!(axis.step(), 1.0);
        assert_eq!(axis.value(8), 8.0);
    }

    #[test]
    fn anchor_grid_masks_the_parabolic_band() {
        let spec = SurfaceSpec::AnchorRing { a: 2.0, r: 1.0 };
        let grid = SurfaceGrid::build(&spec, 64, 32, 0.2, EvalMode::Sequential).unwrap();
        assert_eq!(grid.len(), 64 * 32);
        let excluded = grid.len() - grid.count_valid();
        assert!(excluded > 0, "exclusion band should remove samples");
        // Mask depends only on t: whole phi-rows are excluded together.
        for iu in 0..64 {
            let row: Vec<bool> = (0..32).map(|iv| grid.valid[grid.idx(iu, iv)]).collect();
            assert!(row.iter().all(|&x| x == row[0]));
        }
    }

    #[test]
    fn parallel_and_sequential_builds_agree() {
        let spec = SurfaceSpec::Tube {
            curve: CurveSpec::Helix {
                radius: 1.0,
                pitch: 1.0,
            },
            radius: 0.5,
        };
        let a = SurfaceGrid::build(&spec, 24, 24, 0.2, EvalMode::Sequential).unwrap();
        let b = SurfaceGrid::build(&spec, 24, 24, 0.2, EvalMode::Parallel).unwrap();
        for idx in 0..a.len() {
            assert_eq!(a.jets[idx].x, b.jets[idx].x);
            assert_eq!(a.forms[idx].gauss, b.forms[idx].gauss);
            assert_eq!(a.valid[idx], b.valid[idx]);
        }
    }

    #[test]
    fn csv_has_the_documented_columns() {
        let spec = SurfaceSpec::Sphere {
            radius: 1.0,
            center: [0.0; 3],
        };
        let grid = SurfaceGrid::build(&spec, 5, 6, 0.2, EvalMode::Sequential).unwrap();
        let mut buf = Vec::new();
        grid.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "u,v,x,y,z,E,F,G,L,M,N,e,f,g,K,H");
        assert_eq!(lines.count(), 30);
    }
}
