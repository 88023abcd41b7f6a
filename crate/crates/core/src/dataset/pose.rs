use std::fs::File;
use std::path::Path;

use nalgebra::{Quaternion, UnitQuaternion, Vector3};

use super::table::CsvTable;
use crate::error::{Error, Result};

const POSE_HEADER: [&str; 8] = ["frame", "tx_mm", "ty_mm", "tz_mm", "qx", "qy", "qz", "qw"];
const UNIT_NORM_TOLERANCE: f64 = 1e-6;
const SLERP_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    /// mm
    pub translation: Vector3<f64>,
    pub rotation: UnitQuaternion<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Keyframe {
    pub frame: u64,
    pub pose: Pose,
}

/// Sparse container trajectory, annotated every few frames.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseTrack {
    keyframes: Vec<Keyframe>,
}

impl PoseTrack {
    /// Builds a track from keyframes with strictly increasing frame indices
    /// and unit quaternions.
    pub fn new(keyframes: Vec<Keyframe>) -> Result<Self> {
        if keyframes.is_empty() {
            return Err(Error::InvalidInput("pose track has no keyframes".into()));
        }
        for pair in keyframes.windows(2) {
            if pair[1].frame <= pair[0].frame {
                return Err(Error::InvalidInput(format!(
                    "keyframe frames must strictly increase ({} then {})",
                    pair[0].frame, pair[1].frame
                )));
            }
        }
        for kf in &keyframes {
            let norm = kf.pose.rotation.quaternion().norm();
            if (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
                return Err(Error::InvalidInput(format!(
                    "frame {}: quaternion norm {norm} is not unit",
                    kf.frame
                )));
            }
        }
        Ok(PoseTrack { keyframes })
    }

    pub fn keyframes(&self) -> &[Keyframe] {
        &self.keyframes
    }

    /// Number of frames spanned, from frame 0 up to the last keyframe.
    pub fn frame_count(&self) -> u64 {
        self.last_frame() + 1
    }

    pub fn first_frame(&self) -> u64 {
        self.keyframes[0].frame
    }

    pub fn last_frame(&self) -> u64 {
        self.keyframes[self.keyframes.len() - 1].frame
    }

    pub fn frame_range(&self) -> (u64, u64) {
        (self.first_frame(), self.last_frame())
    }

    pub fn pose_at(&self, frame: u64) -> Result<Pose> {
        interpolate_pose(self, frame)
    }
}

/// Pose at `frame`: translation is interpolated linearly between the bracketing
/// keyframes and rotation along the shortest arc. Frames past the last keyframe
/// hold the last pose.
pub fn interpolate_pose(track: &PoseTrack, frame: u64) -> Result<Pose> {
    let kfs = track.keyframes();
    if frame < track.first_frame() {
        return Err(Error::InvalidInput(format!(
            "frame {frame} precedes the first keyframe {}",
            track.first_frame()
        )));
    }
    if frame >= track.last_frame() {
        return Ok(kfs[kfs.len() - 1].pose);
    }
    // first keyframe strictly after `frame`; exists since frame < last
    let upper = kfs.partition_point(|kf| kf.frame <= frame);
    let (a, b) = (&kfs[upper - 1], &kfs[upper]);
    if a.frame == frame {
        return Ok(a.pose);
    }
    let t = (frame - a.frame) as f64 / (b.frame - a.frame) as f64;
    let translation = a.pose.translation.lerp(&b.pose.translation, t);
    let (qa, qb) = (&a.pose.rotation, &b.pose.rotation);
    let rotation = if qa == qb {
        *qa
    } else {
        qa.try_slerp(qb, t, SLERP_EPSILON)
            .unwrap_or_else(|| qa.nlerp(qb, t))
    };
    Ok(Pose {
        translation,
        rotation,
    })
}

pub fn load_pose_track(path: impl AsRef<Path>) -> Result<PoseTrack> {
    let path = path.as_ref();
    let table = CsvTable::open(path, &POSE_HEADER)?;
    let mut keyframes = Vec::new();
    for row in table.rows() {
        let frame = row.u64("frame")?;
        if let Some(prev) = keyframes.last().map(|k: &Keyframe| k.frame) {
            if frame <= prev {
                return Err(row.error(
                    "frame",
                    format!("frame {frame} does not increase past {prev}"),
                ));
            }
        }
        let q = Quaternion::new(
            row.f64("qw")?,
            row.f64("qx")?,
            row.f64("qy")?,
            row.f64("qz")?,
        );
        let norm = q.norm();
        if (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return Err(row.error("qw", format!("quaternion norm {norm} is not unit")));
        }
        keyframes.push(Keyframe {
            frame,
            pose: Pose {
                translation: Vector3::new(row.f64("tx_mm")?, row.f64("ty_mm")?, row.f64("tz_mm")?),
                // kept as written so that a write/load cycle is exact
                rotation: UnitQuaternion::new_unchecked(q),
            },
        });
    }
    if keyframes.is_empty() {
        return Err(Error::parse(
            path,
            None,
            None,
            "pose track has no keyframes",
        ));
    }
    PoseTrack::new(keyframes)
}

pub fn write_pose_track(path: impl AsRef<Path>, track: &PoseTrack) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record(POSE_HEADER)
        .map_err(|e| Error::csv(path, e))?;
    for kf in track.keyframes() {
        let t = kf.pose.translation;
        let q = kf.pose.rotation.quaternion();
        writer
            .write_record([
                kf.frame.to_string(),
                t.x.to_string(),
                t.y.to_string(),
                t.z.to_string(),
                q.i.to_string(),
                q.j.to_string(),
                q.k.to_string(),
                q.w.to_string(),
            ])
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::io::Write;

    fn kf(frame: u64, x: f64, rotation: UnitQuaternion<f64>) -> Keyframe {
        Keyframe {
            frame,
            pose: Pose {
                translation: Vector3::new(x, 0.0, 0.0),
                rotation,
            },
        }
    }

    fn two_keyframes() -> PoseTrack {
        let r = UnitQuaternion::from_euler_angles(0.1, 0.2, 0.3);
        PoseTrack::new(vec![kf(0, 0.0, r), kf(10, 100.0, r)]).unwrap()
    }

    #[test]
    fn linear_midpoint() {
        let p = interpolate_pose(&two_keyframes(), 5).unwrap();
        assert_relative_eq!(p.translation, Vector3::new(50.0, 0.0, 0.0));
    }

    #[test]
    fn exact_at_keyframe() {
        let track = two_keyframes();
        let p = interpolate_pose(&track, 10).unwrap();
        assert_eq!(p.translation, Vector3::new(100.0, 0.0, 0.0));
        assert_eq!(p, track.keyframes()[1].pose);
    }

    #[test]
    fn identical_rotations_stay_fixed() {
        let track = two_keyframes();
        for f in 0..=10 {
            let p = interpolate_pose(&track, f).unwrap();
            assert_eq!(p.rotation, track.keyframes()[0].pose.rotation);
        }
    }

    #[test]
    fn slerp_halfway_about_z() {
        let a = UnitQuaternion::identity();
        let b = UnitQuaternion::from_euler_angles(0.0, 0.0, 1.0);
        let track = PoseTrack::new(vec![kf(0, 0.0, a), kf(10, 0.0, b)]).unwrap();
        let p = interpolate_pose(&track, 5).unwrap();
        assert_relative_eq!(p.rotation.angle(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn shortest_arc_with_flipped_sign() {
        let a = UnitQuaternion::identity();
        let b = UnitQuaternion::from_euler_angles(0.0, 0.0, 0.4);
        let flipped = UnitQuaternion::new_unchecked(-b.into_inner());
        let track = PoseTrack::new(vec![kf(0, 0.0, a), kf(10, 0.0, flipped)]).unwrap();
        let p = interpolate_pose(&track, 5).unwrap();
        assert_relative_eq!(p.rotation.angle(), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn clamps_after_last_keyframe() {
        let track = two_keyframes();
        let p = interpolate_pose(&track, 1000).unwrap();
        assert_eq!(p.translation.x, 100.0);
    }

    #[test]
    fn before_first_keyframe_is_error() {
        let r = UnitQuaternion::identity();
        let track = PoseTrack::new(vec![kf(5, 0.0, r), kf(15, 1.0, r)]).unwrap();
        assert!(interpolate_pose(&track, 4).is_err());
    }

    #[test]
    fn single_keyframe_is_constant() {
        let track = PoseTrack::new(vec![kf(0, 7.0, UnitQuaternion::identity())]).unwrap();
        assert_eq!(track.frame_count(), 1);
        assert_eq!(interpolate_pose(&track, 0).unwrap().translation.x, 7.0);
        assert_eq!(interpolate_pose(&track, 50).unwrap().translation.x, 7.0);
    }

    fn track_file(rows: &[&str]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "{}", POSE_HEADER.join(",")).unwrap();
        for r in rows {
            writeln!(f, "{r}").unwrap();
        }
        f
    }

    #[test]
    fn loads_frame_count() {
        let f = track_file(&["0,0,0,0,0,0,0,1", "10,10,0,0,0,0,0,1", "20,20,0,0,0,0,0,1"]);
        let track = load_pose_track(f.path()).unwrap();
        assert_eq!(track.frame_count(), 21);
        assert_eq!(track.keyframes().len(), 3);
    }

    #[test]
    fn rejects_half_norm_quaternion() {
        let f = track_file(&["0,0,0,0,0,0,0,0.5"]);
        let err = load_pose_track(f.path()).unwrap_err().to_string();
        assert!(err.contains("not unit"), "{err}");
    }

    #[test]
    fn rejects_non_increasing_frames() {
        let f = track_file(&["0,0,0,0,0,0,0,1", "0,1,0,0,0,0,0,1"]);
        assert!(load_pose_track(f.path()).is_err());
    }

    #[test]
    fn rejects_empty_track() {
        let f = track_file(&[]);
        assert!(load_pose_track(f.path()).is_err());
    }
}
