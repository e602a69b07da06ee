import pytest

from glyphgen.data_core import ColumnSet, ColumnSetDesignation, parse_table
from glyphgen.palettes import default_palettes

# Twelve cities, four regions, five 0-100-ish quantitative columns.
CITIES_CSV = """\
city,region,area,population,bike score,transit score,walk score
Mexico City,North America,1485,8918,45,68,72
New York,North America,778,8468,62,84,88
Toronto,North America,630,2956,61,78,61
Sao Paulo,South America,1521,12330,44,70,66
Buenos Aires,South America,203,3076,58,74,80
Bogota,South America,1775,7413,59,60,69
London,Europe,1572,8982,64,89,81
Paris,Europe,105,2161,70,92,94
Berlin,Europe,891,3769,73,81,77
Tokyo,Asia,2194,13960,57,95,83
Seoul,Asia,605,9776,51,90,74
Singapore,Asia,728,5454,49,87,71
"""

# Frozen seeds that sample into the two worked-example designs
# (drop/wave on a weak spiral; hexagon/star on a medium triangle).
SEED_DESIGN_A = 37924
SEED_DESIGN_B = 58436


@pytest.fixture(scope="session")
def cities_csv() -> str:
    return CITIES_CSV


@pytest.fixture(scope="session")
def cities():
    return parse_table(CITIES_CSV, "city")


@pytest.fixture(scope="session")
def fig_designation():
    """Conjunction over the descriptive columns plus a repeat set over
    the three mobility scores."""
    return ColumnSetDesignation([
        ColumnSet(["region", "area", "population"], "conjunction"),
        ColumnSet(["bike score", "transit score", "walk score"], "repeat"),
    ])


@pytest.fixture(scope="session")
def palette():
    return default_palettes()


def singleton_designation(*columns: str) -> ColumnSetDesignation:
    return ColumnSetDesignation([ColumnSet([c], "single") for c in columns])
