# This file makes the engine directory a Python package
from .units import (Rate, DataVolume, TimeSpan, Money, PriceSlope, rate_times_time,
                    money_from_pounds, slope_times_volume, month_length, DEFAULT_MONTH)
from .tbf import TokenBucket, BucketSpec, refill, conform, max_conformant_volume
from .allocator import (SubscriberState, SubscriberAllocation, AllocationResult, allocate,
                        progressive_fill_oracle)
from .planner import (FlatRatePlan, HybridPlan, FeasibleNRange, AlphaBounds, PlanBounds,
                      SelectionPolicy, UMaxMode, Requirement, ValidationReport, CheckEntry,
                      feasible_n_range, compute_u_max, alpha_bounds, plan_bounds,
                      design_hybrid_plan, validate_hybrid_plan)
from .billing import (UsageRecord, Bill, RequirementReport, monthly_price, bill_group,
                      group_revenue, check_requirements)
from .simulator import (Breakpoint, SubscriberTrace, DemandScenario, SimulationResult,
                        SubscriberQoS, GroupMetrics, GrantSegment, run_hybrid, run_legacy,
                        run_legacy_for_plan, extreme_case_scenarios, compare_modes,
                        MODE_HYBRID, MODE_LEGACY)

__all__ = [
    'Rate', 'DataVolume', 'TimeSpan', 'Money', 'PriceSlope', 'rate_times_time',
    'money_from_pounds', 'slope_times_volume', 'month_length', 'DEFAULT_MONTH',
    'TokenBucket', 'BucketSpec', 'refill', 'conform', 'max_conformant_volume',
    'SubscriberState', 'SubscriberAllocation', 'AllocationResult', 'allocate',
    'progressive_fill_oracle',
    'FlatRatePlan', 'HybridPlan', 'FeasibleNRange', 'AlphaBounds', 'PlanBounds',
    'SelectionPolicy', 'UMaxMode', 'Requirement', 'ValidationReport', 'CheckEntry',
    'feasible_n_range', 'compute_u_max', 'alpha_bounds', 'plan_bounds',
    'design_hybrid_plan', 'validate_hybrid_plan',
    'UsageRecord', 'Bill', 'RequirementReport', 'monthly_price', 'bill_group',
    'group_revenue', 'check_requirements',
    'Breakpoint', 'SubscriberTrace', 'DemandScenario', 'SimulationResult', 'SubscriberQoS',
    'GroupMetrics', 'GrantSegment', 'run_hybrid', 'run_legacy', 'run_legacy_for_plan',
    'extreme_case_scenarios', 'compare_modes', 'MODE_HYBRID', 'MODE_LEGACY',
]
