class RetrievalError(Exception):
    """
    Базовая ошибка приложения семантического поиска.

    `stage` заполняет оркестратор эксперимента, чтобы было видно,
    на каком шаге конвейера всё сломалось.
    """

    stage = None


class DimensionMismatchError(RetrievalError, ValueError):
    pass


class ZeroNormError(RetrievalError, ValueError):
    """
    Вектор с нулевой нормой: косинус для него не определён.
    """

    def __init__(self, message, item_id=None):
        super().__init__(message)
        self.item_id = item_id


class DuplicateItemError(RetrievalError, ValueError):
    pass


class UnknownItemError(RetrievalError, KeyError):
    def __str__(self):
        # KeyError по умолчанию оборачивает сообщение в кавычки
        return str(self.args[0]) if self.args else ""


class ConfigError(RetrievalError, ValueError):
    pass


class ConvergenceError(RetrievalError):
    """
    Степенной метод не сошёлся за отведённое число итераций.
    """

    def __init__(self, message, residual, iterations):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class DatasetError(RetrievalError):
    pass


class PlotError(RetrievalError):
    pass


class ExportError(RetrievalError):
    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path
