"""Tests for config loading and validation."""

import json

import pytest

from models.experiment import SweepKind
from services.geometry_service import GeometryService
from utils.config_validation import load_config, parse_config, resolve_geometry
from utils.errors import ConfigInvalidError


def base_config(**overrides):
    data = {
        "geometry": {"preset": "ellipse", "params": {"c": 1.0, "d": 0.25}},
        "z0": "inf",
        "n_range": [2, 8, 2],
        "grid_M": 256,
    }
    data.update(overrides)
    return data


class TestParseConfig:
    """Test cases for parse_config."""

    def test_defaults(self):
        """Unspecified fields take their defaults."""
        config = parse_config(base_config())

        assert config.z0 == "inf"
        assert config.r_list == [2.0]
        assert config.sweeps == [SweepKind.WIDOM]
        assert config.degrees == [2, 4, 6, 8]
        assert config.n_max == 8
        assert config.tolerances.lawson_gap == 1e-3

    def test_complex_pairs(self):
        """z0 and atom locations accept [re, im] pairs."""
        config = parse_config(base_config(z0=[1.5, -2.0], atoms=[{"location": [0.1, 0.2], "mass": 0.5}]))

        assert config.z0 == 1.5 - 2.0j
        assert config.atoms[0].location == 0.1 + 0.2j

    @pytest.mark.parametrize(
        "overrides, field",
        [
            ({"n_range": [4, 2, 1]}, "n_range"),
            ({"r_list": [2.0, -1.0]}, "r_list"),
            ({"sweeps": ["widom", "fourier"]}, "sweeps.1"),
            ({"grid_M": 0}, "grid_M"),
        ],
    )
    def test_invalid_fields_are_named(self, overrides, field):
        """The first offending field is reported."""
        with pytest.raises(ConfigInvalidError) as exc_info:
            parse_config(base_config(**overrides))

        assert exc_info.value.field == field

    def test_missing_geometry(self):
        """Required fields are reported by name."""
        data = base_config()
        del data["geometry"]

        with pytest.raises(ConfigInvalidError, match="geometry"):
            parse_config(data)

    def test_root_must_be_an_object(self):
        """A JSON array is not a config."""
        with pytest.raises(ConfigInvalidError, match="JSON object"):
            parse_config([1, 2])


class TestLoadConfig:
    """Test cases for load_config."""

    def test_load_from_file(self, tmp_path):
        """Config files are JSON documents."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps(base_config(name="from-file")))

        assert load_config(path).name == "from-file"

    def test_missing_file(self, tmp_path):
        """Missing files are config errors."""
        with pytest.raises(ConfigInvalidError, match="not found"):
            load_config(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        """Malformed JSON is a config error."""
        path = tmp_path / "config.json"
        path.write_text("{not json")

        with pytest.raises(ConfigInvalidError, match="invalid JSON"):
            load_config(path)


class TestResolveGeometry:
    """Test cases for semantic validation against the geometry."""

    def setup_method(self):
        self.geometry = GeometryService()

    def test_resolves_map_and_normalization(self):
        """A valid config yields the map normalized at z0."""
        exterior_map, nm = resolve_geometry(parse_config(base_config(z0=[2.0, 0.0])), self.geometry)

        assert exterior_map.tail == [0.25]
        assert nm.z0 == 2.0

    @pytest.mark.parametrize(
        "overrides, field",
        [
            ({"grid_M": 100}, "grid_M"),
            ({"grid_M": 64}, "grid_M"),
            ({"z0": [0.5, 0.0]}, "z0"),
            ({"sweeps": ["ahlfors"]}, "z0"),
            ({"geometry": {"preset": "square"}}, "geometry"),
        ],
    )
    def test_semantic_errors(self, overrides, field):
        """Grid rule, z0 in Omega, Ahlfors at a finite point and known presets."""
        with pytest.raises(ConfigInvalidError) as exc_info:
            resolve_geometry(parse_config(base_config(**overrides)), self.geometry)

        assert exc_info.value.field == field
