"""
錯誤類型模組
定義矩陣、格式、設定與求解器的例外階層
"""


class ResPcaError(Exception):
    """所有 RES-PCA 例外的基底類別"""


class MatrixError(ResPcaError):
    """矩陣內容或形狀錯誤"""


class NonFiniteValueError(MatrixError):
    """矩陣含有 NaN 或 Inf"""


class ShapeError(MatrixError):
    """矩陣形狀不合法"""


class EmptySelectionError(MatrixError):
    """欄位索引集合為空"""


class ConfigError(ResPcaError):
    """參數設定不合法"""


class SolverError(ResPcaError):
    """求解過程中的數值錯誤"""


class FormatError(ResPcaError):
    """檔案格式錯誤"""

    def __init__(self, message: str, path: str = None, line: int = None):
        self.path = path
        self.line = line
        location = ''
        if path is not None:
            location += f"{path}"
        if line is not None:
            location += f":{line}"
        super().__init__(f"{location}: {message}" if location else message)


class DimensionMismatchError(MatrixError, FormatError):
    """維度不一致 (矩陣運算或影格尺寸)"""

    def __init__(self, message: str, path: str = None, line: int = None):
        FormatError.__init__(self, message, path=path, line=line)


class EmptyFileError(FormatError):
    """檔案沒有任何資料"""


class RaggedRowError(FormatError):
    """CSV 列長度不一致"""


class NonNumericCellError(FormatError):
    """CSV 儲存格不是數值"""

    def __init__(self, message: str, path: str = None, line: int = None, column: int = None):
        self.column = column
        super().__init__(message, path=path, line=line)


class BadMagicError(FormatError):
    """二進位矩陣檔案的魔術位元組錯誤"""


class TruncatedPayloadError(FormatError):
    """二進位矩陣資料長度不足"""


class TrailingDataError(FormatError):
    """二進位矩陣資料後有多餘位元組"""


class UnsupportedPgmError(FormatError):
    """不支援的 PGM 格式 (非 P5 或 maxval 不是 255)"""
