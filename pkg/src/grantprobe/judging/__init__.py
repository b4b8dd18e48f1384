from .panel import (
    JUDGE_SYSTEM_TEXT,
    JUDGE_USER_TEMPLATE,
    JudgeVerdict,
    PanelVerdict,
    Verdict,
    build_judge_prompt,
    detection_value,
    judge_once,
    judge_pair,
    panel_majority,
)

__all__ = [
    "JUDGE_SYSTEM_TEXT",
    "JUDGE_USER_TEMPLATE",
    "JudgeVerdict",
    "PanelVerdict",
    "Verdict",
    "build_judge_prompt",
    "detection_value",
    "judge_once",
    "judge_pair",
    "panel_majority",
]
