use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the quasi-static handover model. Lengths in mm unless noted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimParams {
    /// m/s^2
    pub gravity: f64,
    /// Peak acceleration of the arm while carrying the object, m/s^2.
    pub max_acceleration: f64,
    /// Friction coefficient between container and gripper.
    pub friction: f64,
    /// Sensitivity `c` of the object safety score, in (0, 1).
    pub safety_sensitivity: f64,
    /// Largest accepted distance from the delivery target.
    pub max_delivery_distance: f64,
    /// Tip-over angle in radians; derived from the container shape when unset.
    pub tip_angle_override: Option<f64>,
    /// End-effector speed, m/s.
    pub max_speed: f64,
    pub reach_tolerance: f64,
    /// Seconds the last container pose is held after the track ends.
    pub hold_after_end: f64,
    /// The gripper closes to the object width minus this margin.
    pub grip_margin: f64,
    /// Largest container width the open gripper accepts.
    pub gripper_stroke: f64,
    /// Force ratios below this drop the container.
    pub slip_threshold: f64,
    /// Slip distance at force ratio 0.
    pub slip_length: f64,
    /// Force ratios above this break the container.
    pub break_ratio: f64,
    /// End-effector start position.
    pub home: [f64; 3],
    /// Robot base position; the end effector stays within `max_reach` of it.
    pub base: [f64; 3],
    pub max_reach: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            gravity: 9.81,
            max_acceleration: 2.0,
            friction: 1.0,
            safety_sensitivity: 0.9,
            max_delivery_distance: 50.0,
            tip_angle_override: None,
            max_speed: 1.0,
            reach_tolerance: 10.0,
            hold_after_end: 2.0,
            grip_margin: 20.0,
            gripper_stroke: 85.0,
            slip_threshold: 0.5,
            slip_length: 50.0,
            break_ratio: 3.0,
            home: [0.0, 0.0, 400.0],
            base: [0.0, 0.0, 0.0],
            max_reach: 850.0,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("gravity", self.gravity),
            ("friction", self.friction),
            ("max_delivery_distance", self.max_delivery_distance),
            ("max_speed", self.max_speed),
            ("reach_tolerance", self.reach_tolerance),
            ("grip_margin", self.grip_margin),
            ("gripper_stroke", self.gripper_stroke),
            ("slip_threshold", self.slip_threshold),
            ("slip_length", self.slip_length),
            ("break_ratio", self.break_ratio),
            ("max_reach", self.max_reach),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.max_acceleration >= 0.0) || !(self.hold_after_end >= 0.0) {
            return Err(Error::InvalidInput(
                "max_acceleration and hold_after_end must be non-negative".into(),
            ));
        }
        if !(self.safety_sensitivity > 0.0 && self.safety_sensitivity < 1.0) {
            return Err(Error::InvalidInput(format!(
                "safety_sensitivity must lie in (0, 1), got {}",
                self.safety_sensitivity
            )));
        }
        if let Some(phi) = self.tip_angle_override {
            if !(phi > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "tip angle must be positive, got {phi}"
                )));
            }
        }
        if !(self.slip_threshold < 1.0 && self.break_ratio >= 1.0) {
            return Err(Error::InvalidInput(
                "slip_threshold must be below 1 and break_ratio at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Sets one parameter from its textual key and value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = || -> Result<f64> {
            value.trim().parse().map_err(|_| {
                Error::InvalidInput(format!("parameter `{key}`: `{value}` is not a number"))
            })
        };
        let vec3 = || -> Result<[f64; 3]> {
            let parts: Vec<f64> = value
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidInput(format!("parameter `{key}`: expected x,y,z")))?;
            <[f64; 3]>::try_from(parts)
                .map_err(|_| Error::InvalidInput(format!("parameter `{key}`: expected x,y,z")))
        };
        match key {
            "gravity" => self.gravity = num()?,
            "max_acceleration" | "a_max" => self.max_acceleration = num()?,
            "friction" | "mu" => self.friction = num()?,
            "safety_sensitivity" | "c" => self.safety_sensitivity = num()?,
            "max_delivery_distance" | "eta" => self.max_delivery_distance = num()?,
            "tip_angle" | "phi" => self.tip_angle_override = Some(num()?),
            "max_speed" | "v_max" => self.max_speed = num()?,
            "reach_tolerance" => self.reach_tolerance = num()?,
            "hold_after_end" => self.hold_after_end = num()?,
            "grip_margin" => self.grip_margin = num()?,
            "gripper_stroke" => self.gripper_stroke = num()?,
            "slip_threshold" | "r_min" => self.slip_threshold = num()?,
            "slip_length" => self.slip_length = num()?,
            "break_ratio" | "kappa" => self.break_ratio = num()?,
            "home" => self.home = vec3()?,
            "base" => self.base = vec3()?,
            "max_reach" => self.max_reach = num()?,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown simulation parameter `{other}`"
                )))
            }
        }
        Ok(())
    }
}
