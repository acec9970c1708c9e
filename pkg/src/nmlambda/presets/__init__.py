"""Figure presets shipped as scenario files."""
