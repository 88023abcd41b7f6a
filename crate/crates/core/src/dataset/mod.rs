//! Annotation, prediction and pose-track schemas with their CSV loaders.

mod annotation;
mod density;
mod pose;
mod prediction;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use annotation::{
    load_annotations, validate_against_track, write_annotations, ConfigurationAnnotation,
    ANNOTATION_HEADER,
};
pub use density::{build_density_table, DensityTable};
pub use pose::{interpolate_pose, load_pose_track, write_pose_track, Keyframe, Pose, PoseTrack};
pub use prediction::{
    load_predictions, write_predictions, PredictionRecord, PredictionSet, Task, TaskSet,
    PREDICTION_HEADER,
};

/// Content of a container (task T2 classes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FillingType {
    None = 0,
    Pasta = 1,
    Rice = 2,
    Water = 3,
}

impl FillingType {
    pub const ALL: [FillingType; 4] = [
        FillingType::None,
        FillingType::Pasta,
        FillingType::Rice,
        FillingType::Water,
    ];

    pub fn code(self) -> usize {
        self as usize
    }

    pub fn from_code(code: i64) -> Option<Self> {
        usize::try_from(code)
            .ok()
            .and_then(|c| Self::ALL.get(c).copied())
    }
}

impl fmt::Display for FillingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FillingType::None => "none",
            FillingType::Pasta => "pasta",
            FillingType::Rice => "rice",
            FillingType::Water => "water",
        };
        f.write_str(name)
    }
}

/// Fraction of the capacity occupied by the filling (task T1 classes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FillingLevel {
    Empty = 0,
    Half = 1,
    Full = 2,
}

impl FillingLevel {
    pub const ALL: [FillingLevel; 3] =
        [FillingLevel::Empty, FillingLevel::Half, FillingLevel::Full];

    pub fn code(self) -> usize {
        self as usize
    }

    pub fn from_code(code: i64) -> Option<Self> {
        usize::try_from(code)
            .ok()
            .and_then(|c| Self::ALL.get(c).copied())
    }

    /// Multiplier applied to the capacity: 0, 0.5 or 0.9.
    pub fn fraction(self) -> f64 {
        match self {
            FillingLevel::Empty => 0.0,
            FillingLevel::Half => 0.5,
            FillingLevel::Full => 0.9,
        }
    }
}

impl fmt::Display for FillingLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FillingLevel::Empty => "empty",
            FillingLevel::Half => "50%",
            FillingLevel::Full => "90%",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContainerCategory {
    Cup,
    DrinkingGlass,
    FoodBox,
}

impl ContainerCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ContainerCategory::Cup => "cup",
            ContainerCategory::DrinkingGlass => "drinking-glass",
            ContainerCategory::FoodBox => "food-box",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cup" => Some(ContainerCategory::Cup),
            "drinking-glass" => Some(ContainerCategory::DrinkingGlass),
            "food-box" => Some(ContainerCategory::FoodBox),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Split {
    Train,
    PublicTest,
    PrivateTest,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::PublicTest => "public-test",
            Split::PrivateTest => "private-test",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "train" => Some(Split::Train),
            "public-test" => Some(Split::PublicTest),
            "private-test" => Some(Split::PrivateTest),
            _ => None,
        }
    }
}

/// Which annotated configurations a run is scored on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SplitSelector {
    Train,
    PublicTest,
    PrivateTest,
    /// Public and private test sets together.
    Combined,
}

impl SplitSelector {
    pub fn contains(self, split: Split) -> bool {
        match self {
            SplitSelector::Train => split == Split::Train,
            SplitSelector::PublicTest => split == Split::PublicTest,
            SplitSelector::PrivateTest => split == Split::PrivateTest,
            SplitSelector::Combined => matches!(split, Split::PublicTest | Split::PrivateTest),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SplitSelector::Train => "train",
            SplitSelector::PublicTest => "public-test",
            SplitSelector::PrivateTest => "private-test",
            SplitSelector::Combined => "combined",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "combined" => Some(SplitSelector::Combined),
            other => Split::parse(other).map(|split| match split {
                Split::Train => SplitSelector::Train,
                Split::PublicTest => SplitSelector::PublicTest,
                Split::PrivateTest => SplitSelector::PrivateTest,
            }),
        }
    }
}

impl fmt::Display for SplitSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip() {
        for t in FillingType::ALL {
            assert_eq!(FillingType::from_code(t.code() as i64), Some(t));
        }
        for l in FillingLevel::ALL {
            assert_eq!(FillingLevel::from_code(l.code() as i64), Some(l));
        }
        assert_eq!(FillingType::from_code(4), None);
        assert_eq!(FillingLevel::from_code(-1), None);
    }

    #[test]
    fn level_fractions() {
        assert_eq!(FillingLevel::Empty.fraction(), 0.0);
        assert_eq!(FillingLevel::Half.fraction(), 0.5);
        assert_eq!(FillingLevel::Full.fraction(), 0.9);
    }

    #[test]
    fn combined_covers_both_test_sets() {
        let c = SplitSelector::Combined;
        assert!(c.contains(Split::PublicTest));
        assert!(c.contains(Split::PrivateTest));
        assert!(!c.contains(Split::Train));
        assert_eq!(
            SplitSelector::parse("public-test"),
            Some(SplitSelector::PublicTest)
        );
    }
}
