//! Bundled scenario files.

pub struct Preset {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! preset {
    ($name:literal) => {
        Preset {
            name: $name,
            text: include_str!(concat!("../presets/", $name, ".conf")),
        }
    };
}

pub const PRESETS: &[Preset] = &[
    preset!("fig4"),
    preset!("fig5"),
    preset!("fig6"),
    preset!("fig7"),
    preset!("fig8"),
    preset!("fig9a"),
    preset!("fig9b"),
    preset!("fig10a"),
    preset!("fig10b"),
    preset!("fig11a"),
    preset!("fig11b"),
    preset!("fig12a"),
    preset!("fig12b"),
    preset!("greens"),
];

impl Preset {
    /// First comment line, without the leading `#`.
    pub fn description(&self) -> &'static str {
        self.text
            .lines()
            .next()
            .and_then(|l| l.strip_prefix('#'))
            .map(str::trim)
            .unwrap_or("")
    }
}

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
