# Expose the statistical comparison API
from .distributions import (
    DegenerateInputError,
    InvalidParametersError,
    StatsError,
    f_cdf,
    f_sf,
    studentized_range_cdf,
    studentized_range_critical,
    studentized_range_sf,
    t_cdf,
    t_two_sided_p,
)
from .hypothesis_tests import (
    AnovaResult,
    HomogeneousSubset,
    SampleGroup,
    StatsReport,
    TTestResult,
    TukeyResult,
    anova_oneway,
    compare_groups,
    homogeneous_subsets,
    ttest_ind,
    tukey_hsd,
)

__all__ = [
    'DegenerateInputError', 'InvalidParametersError', 'StatsError',
    'f_cdf', 'f_sf', 'studentized_range_cdf', 'studentized_range_critical',
    'studentized_range_sf', 't_cdf', 't_two_sided_p',
    'AnovaResult', 'HomogeneousSubset', 'SampleGroup', 'StatsReport', 'TTestResult',
    'TukeyResult', 'anova_oneway', 'compare_groups', 'homogeneous_subsets',
    'ttest_ind', 'tukey_hsd',
]
