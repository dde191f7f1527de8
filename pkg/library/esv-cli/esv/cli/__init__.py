from ._app import (
    cli,
    main,
    run_scenarios,
)
from ._errors import (
    StageError,
    exit_code,
)
from ._pipeline import (
    STAGES,
    run_cost_benefit,
    run_fuzzy,
    run_pipeline,
    run_valuation,
    run_weights,
    stage,
    toolkit_version,
)
from ._record import (
    RECORD_VERSION,
    RunRecord,
    load_record,
)
from ._report import (
    FORMATS,
    ForecastReport,
    emit_report,
    format_number,
    render,
)
from ._scenario import (
    DATA_DIR_ENV,
    SCENARIO_SUFFIX,
    Options,
    Scenario,
    data_dir,
    find_scenario,
    load_scenario,
    read_grade_tables,
    read_matrix,
)

__all__ = (
    'cli',
    'main',
    'run_scenarios',
    'StageError',
    'exit_code',
    'STAGES',
    'run_cost_benefit',
    'run_fuzzy',
    'run_pipeline',
    'run_valuation',
    'run_weights',
    'stage',
    'toolkit_version',
    'RECORD_VERSION',
    'RunRecord',
    'load_record',
    'FORMATS',
    'ForecastReport',
    'emit_report',
    'format_number',
    'render',
    'DATA_DIR_ENV',
    'SCENARIO_SUFFIX',
    'Options',
    'Scenario',
    'data_dir',
    'find_scenario',
    'load_scenario',
    'read_grade_tables',
    'read_matrix',
)
