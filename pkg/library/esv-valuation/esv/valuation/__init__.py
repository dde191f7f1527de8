from ._errors import (
    InvalidDepth,
    InvalidUrbanParams,
    InvalidUseMatrix,
    NegativeCost,
    ShapeMismatch,
    UnknownFormula,
    ZeroArea,
    ZeroQ,
)
from ._marine import (
    MarineInputs,
    Pollutant,
    climate_regulation,
    fishery_value,
    landscape_value,
    pollution_control,
)
from ._total import (
    MARINE_SERVICES,
    ServiceValuation,
    total_service_value,
)
from ._urban import (
    DEFAULT_FORMULA,
    UrbanFormula,
    UrbanParams,
    get_urban_formula,
    register_urban_formula,
    urban_unit_value,
)

__all__ = (
    'InvalidDepth',
    'InvalidUrbanParams',
    'InvalidUseMatrix',
    'NegativeCost',
    'ShapeMismatch',
    'UnknownFormula',
    'ZeroArea',
    'ZeroQ',
    'MarineInputs',
    'Pollutant',
    'climate_regulation',
    'fishery_value',
    'landscape_value',
    'pollution_control',
    'MARINE_SERVICES',
    'ServiceValuation',
    'total_service_value',
    'DEFAULT_FORMULA',
    'UrbanFormula',
    'UrbanParams',
    'get_urban_formula',
    'register_urban_formula',
    'urban_unit_value',
)
