use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::table::{CsvTable, Row};
use super::{ContainerCategory, FillingLevel, FillingType, PoseTrack, Split};
use crate::error::{Error, Result};

pub const ANNOTATION_HEADER: [&str; 18] = [
    "config_id",
    "container_id",
    "category",
    "capacity_ml",
    "mass_g",
    "wt_mm",
    "wb_mm",
    "h_mm",
    "fill_type",
    "fill_level",
    "fill_mass_g",
    "handover_frame",
    "fps",
    "pose_path",
    "target_x_mm",
    "target_y_mm",
    "target_z_mm",
    "split",
];

/// Relative tolerance between the annotated water mass and level x capacity.
const WATER_MASS_TOLERANCE: f64 = 0.01;

/// Ground truth for one recorded configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationAnnotation {
    pub config_id: String,
    pub container_id: String,
    pub category: ContainerCategory,
    /// mL
    pub capacity: f64,
    /// Empty container mass, g.
    pub container_mass: f64,
    /// mm
    pub width_top: f64,
    /// mm
    pub width_bottom: f64,
    /// mm
    pub height: f64,
    pub filling_type: FillingType,
    pub filling_level: FillingLevel,
    /// g
    pub filling_mass: f64,
    pub handover_frame: u64,
    /// Hz
    pub frame_rate: f64,
    /// Pose track file, relative paths resolve against the annotation file directory.
    pub pose_track: PathBuf,
    /// Delivery target, mm.
    pub target: [f64; 3],
    pub split: Split,
}

impl ConfigurationAnnotation {
    /// Container plus content, g.
    pub fn object_mass(&self) -> f64 {
        self.container_mass + self.filling_mass
    }

    /// Width the gripper closes on: the top width for cups and glasses,
    /// the larger of the two widths for boxes.
    pub fn grasp_width(&self) -> f64 {
        match self.category {
            ContainerCategory::FoodBox => self.width_top.max(self.width_bottom),
            ContainerCategory::Cup | ContainerCategory::DrinkingGlass => self.width_top,
        }
    }

    pub fn resolve_pose_path(&self, base_dir: &Path) -> PathBuf {
        if self.pose_track.is_absolute() {
            self.pose_track.clone()
        } else {
            base_dir.join(&self.pose_track)
        }
    }

    /// Checks the filling invariants; returns the offending field and message.
    fn check(&self) -> std::result::Result<(), (&'static str, String)> {
        let positive = [
            ("capacity_ml", self.capacity, "non-positive capacity"),
            ("mass_g", self.container_mass, "non-positive container mass"),
            ("wt_mm", self.width_top, "non-positive top width"),
            ("wb_mm", self.width_bottom, "non-positive bottom width"),
            ("h_mm", self.height, "non-positive height"),
            ("fps", self.frame_rate, "non-positive frame rate"),
        ];
        for (field, value, msg) in positive {
            if value <= 0.0 {
                return Err((field, msg.to_owned()));
            }
        }
        if self.filling_mass < 0.0 {
            return Err(("fill_mass_g", "negative filling mass".to_owned()));
        }
        let no_type = self.filling_type == FillingType::None;
        let no_level = self.filling_level == FillingLevel::Empty;
        let no_mass = self.filling_mass == 0.0;
        if no_type != no_level || no_type != no_mass {
            let field = if no_type != no_level {
                "fill_level"
            } else {
                "fill_mass_g"
            };
            return Err((field, "inconsistent empty filling".to_owned()));
        }
        if self.filling_type == FillingType::Water {
            let expected = self.filling_level.fraction() * self.capacity;
            if (self.filling_mass - expected).abs() > WATER_MASS_TOLERANCE * expected {
                return Err((
                    "fill_mass_g",
                    format!(
                        "water mass {} g differs from level x capacity {expected} g by more than 1%",
                        self.filling_mass
                    ),
                ));
            }
        }
        Ok(())
    }

    fn from_row(row: &Row<'_>) -> Result<Self> {
        let category_raw = row.str("category")?;
        let category = ContainerCategory::parse(category_raw)
            .ok_or_else(|| row.error("category", format!("unknown category `{category_raw}`")))?;
        let type_code = row.i64("fill_type")?;
        let filling_type = FillingType::from_code(type_code)
            .ok_or_else(|| row.error("fill_type", format!("unknown filling type {type_code}")))?;
        let level_code = row.i64("fill_level")?;
        let filling_level = FillingLevel::from_code(level_code).ok_or_else(|| {
            row.error("fill_level", format!("unknown filling level {level_code}"))
        })?;
        let split_raw = row.str("split")?;
        let split = Split::parse(split_raw)
            .ok_or_else(|| row.error("split", format!("unknown split `{split_raw}`")))?;
        let config_id = row.str("config_id")?.to_owned();
        if config_id.is_empty() {
            return Err(row.error("config_id", "empty config id"));
        }
        let ann = ConfigurationAnnotation {
            config_id,
            container_id: row.str("container_id")?.to_owned(),
            category,
            capacity: row.f64("capacity_ml")?,
            container_mass: row.f64("mass_g")?,
            width_top: row.f64("wt_mm")?,
            width_bottom: row.f64("wb_mm")?,
            height: row.f64("h_mm")?,
            filling_type,
            filling_level,
            filling_mass: row.f64("fill_mass_g")?,
            handover_frame: row.u64("handover_frame")?,
            frame_rate: row.f64("fps")?,
            pose_track: PathBuf::from(row.str("pose_path")?),
            target: [
                row.f64("target_x_mm")?,
                row.f64("target_y_mm")?,
                row.f64("target_z_mm")?,
            ],
            split,
        };
        ann.check().map_err(|(field, msg)| row.error(field, msg))?;
        Ok(ann)
    }

    fn to_record(&self) -> Vec<String> {
        vec![
            self.config_id.clone(),
            self.container_id.clone(),
            self.category.as_str().to_owned(),
            self.capacity.to_string(),
            self.container_mass.to_string(),
            self.width_top.to_string(),
            self.width_bottom.to_string(),
            self.height.to_string(),
            self.filling_type.code().to_string(),
            self.filling_level.code().to_string(),
            self.filling_mass.to_string(),
            self.handover_frame.to_string(),
            self.frame_rate.to_string(),
            self.pose_track.display().to_string(),
            self.target[0].to_string(),
            self.target[1].to_string(),
            self.target[2].to_string(),
            self.split.as_str().to_owned(),
        ]
    }
}

/// Parses an annotation CSV, preserving row order.
pub fn load_annotations(path: impl AsRef<Path>) -> Result<Vec<ConfigurationAnnotation>> {
    let path = path.as_ref();
    let table = CsvTable::open(path, &ANNOTATION_HEADER)?;
    let mut out: Vec<ConfigurationAnnotation> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for row in table.rows() {
        let ann = ConfigurationAnnotation::from_row(&row)?;
        if !seen.insert(ann.config_id.clone()) {
            return Err(row.error(
                "config_id",
                format!("duplicate config id `{}`", ann.config_id),
            ));
        }
        out.push(ann);
    }
    Ok(out)
}

pub fn write_annotations(
    path: impl AsRef<Path>,
    annotations: &[ConfigurationAnnotation],
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record(ANNOTATION_HEADER)
        .map_err(|e| Error::csv(path, e))?;
    for ann in annotations {
        writer
            .write_record(ann.to_record())
            .map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Checks that the handover frame falls inside the track's keyframe range.
pub fn validate_against_track(ann: &ConfigurationAnnotation, track: &PoseTrack) -> Result<()> {
    let (first, last) = track.frame_range();
    if ann.handover_frame < first || ann.handover_frame > last {
        return Err(Error::InvalidInput(format!(
            "config `{}`: handover frame {} outside pose track range [{first}, {last}]",
            ann.config_id, ann.handover_frame
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    const HEADER: &str = "config_id,container_id,category,capacity_ml,mass_g,wt_mm,wb_mm,h_mm,fill_type,fill_level,fill_mass_g,handover_frame,fps,pose_path,target_x_mm,target_y_mm,target_z_mm,split";

    fn csv_file(body: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "{HEADER}").unwrap();
        write!(f, "{body}").unwrap();
        f
    }

    fn message(err: Error) -> String {
        err.to_string()
    }

    #[test]
    fn parses_two_rows_in_order() {
        let f = csv_file(
            "c1,cup1,cup,500,20,80,60,100,3,1,250,30,30,poses/c1.csv,300,-400,0,train\n\
             c0,box1,food-box,1000,40,90,90,150,0,0,0,10,30,poses/c0.csv,300,-400,0,public-test\n",
        );
        let anns = load_annotations(f.path()).unwrap();
        assert_eq!(anns.len(), 2);
        assert_eq!(anns[0].config_id, "c1");
        assert_eq!(anns[0].filling_type, FillingType::Water);
        assert_eq!(anns[0].filling_level, FillingLevel::Half);
        assert_eq!(anns[1].category, ContainerCategory::FoodBox);
        assert_eq!(anns[1].split, Split::PublicTest);
        assert_eq!(anns[0].object_mass(), 270.0);
        assert_eq!(anns[1].grasp_width(), 90.0);
    }

    #[test]
    fn rejects_mass_on_empty_filling() {
        let f = csv_file("c1,cup1,cup,500,20,80,60,100,0,0,10,30,30,p.csv,0,0,0,train\n");
        let msg = message(load_annotations(f.path()).unwrap_err());
        assert!(msg.contains("inconsistent empty filling"), "{msg}");
        assert!(msg.contains("row 1"), "{msg}");
    }

    #[test]
    fn rejects_type_without_level() {
        let f = csv_file("c1,cup1,cup,500,20,80,60,100,1,0,0,30,30,p.csv,0,0,0,train\n");
        let msg = message(load_annotations(f.path()).unwrap_err());
        assert!(msg.contains("inconsistent empty filling"), "{msg}");
    }

    #[test]
    fn rejects_negative_capacity() {
        let f = csv_file("c1,cup1,cup,-5,20,80,60,100,0,0,0,30,30,p.csv,0,0,0,train\n");
        let msg = message(load_annotations(f.path()).unwrap_err());
        assert!(msg.contains("non-positive capacity"), "{msg}");
        assert!(msg.contains("capacity_ml"), "{msg}");
    }

    #[test]
    fn rejects_non_numeric_field() {
        let f = csv_file("c1,cup1,cup,abc,20,80,60,100,0,0,0,30,30,p.csv,0,0,0,train\n");
        let err = load_annotations(f.path()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(message(err).contains("non-numeric"));
    }

    #[test]
    fn rejects_inconsistent_water_mass() {
        let f = csv_file("c1,cup1,cup,500,20,80,60,100,3,2,300,30,30,p.csv,0,0,0,train\n");
        let msg = message(load_annotations(f.path()).unwrap_err());
        assert!(msg.contains("water mass"), "{msg}");
    }

    #[test]
    fn reports_missing_column() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "config_id,container_id").unwrap();
        writeln!(f, "c1,cup1").unwrap();
        let msg = message(load_annotations(f.path()).unwrap_err());
        assert!(msg.contains("missing column"), "{msg}");
        assert!(msg.contains("category"), "{msg}");
    }

    #[test]
    fn rejects_duplicate_ids() {
        let row = "c1,cup1,cup,500,20,80,60,100,0,0,0,30,30,p.csv,0,0,0,train\n";
        let f = csv_file(&format!("{row}{row}"));
        assert!(message(load_annotations(f.path()).unwrap_err()).contains("duplicate"));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_annotations("/nonexistent/annotations.csv").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert_eq!(err.exit_code(), 2);
    }
}
