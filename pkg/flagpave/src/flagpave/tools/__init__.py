from .roots_tool import RootsTool, ClassifyTool
from .rep_tools import IndecTool, HomTool, ExtTool
from .extended_tools import ExtQuiverTool, PhiTool
from .ar_tools import ARTool, TauTool, ARSeqTool, SecMonoTool, XSTool
from .count_tools import CountTool, PaveTool, VerifyTool

__all__ = ['RootsTool', 'ClassifyTool', 'IndecTool', 'HomTool', 'ExtTool', 'ExtQuiverTool', 'PhiTool', 'ARTool', 'TauTool', 'ARSeqTool', 'SecMonoTool', 'XSTool', 'CountTool', 'PaveTool', 'VerifyTool']

ALL_TOOLS = [RootsTool, ClassifyTool, IndecTool, HomTool, ExtTool, ExtQuiverTool, PhiTool, ARTool, TauTool,
             ARSeqTool, SecMonoTool, XSTool, CountTool, PaveTool, VerifyTool]
